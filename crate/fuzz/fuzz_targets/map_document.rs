#![no_main]

//! Fuzzes the JSON map-document loader together with its two consumers,
//! triangular group elements and additive flows. Whatever loads must
//! survive a serialization round trip unchanged.

use libfuzzer_sys::fuzz_target;

use dejonq::expr::{MapDocument, MapVariant};
use dejonq::jonq::JonqElement;
use dejonq::slice::AdditiveFlow;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(doc) = MapDocument::from_json(text) else {
        return;
    };
    match doc.variant {
        MapVariant::J | MapVariant::Jhat => {
            if let Ok(element) = JonqElement::from_document(&doc) {
                let json = element.to_document().to_json();
                let reloaded = MapDocument::from_json(&json).expect("serialized document parses");
                let again =
                    JonqElement::from_document(&reloaded).expect("serialized document loads");
                assert_eq!(again, element, "round trip changed the element");
            }
        }
        MapVariant::Flow => {
            if let Ok(flow) = AdditiveFlow::from_document(&doc) {
                let json = flow.to_document().to_json();
                let reloaded = MapDocument::from_json(&json).expect("serialized document parses");
                let again =
                    AdditiveFlow::from_document(&reloaded).expect("serialized document loads");
                assert_eq!(again, flow, "round trip changed the flow");
            }
        }
    }
});

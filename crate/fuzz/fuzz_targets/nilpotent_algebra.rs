#![no_main]

//! Fuzzes the JSON algebra loader. Algebras that pass validation are fed to
//! the coadjoint-flow construction, which must produce one flow per basis
//! vector with the right arity. The construction is dense in the dimension,
//! so it is only exercised for small algebras to keep executions fast.

use libfuzzer_sys::fuzz_target;

use dejonq::expr::AlgebraDocument;
use dejonq::slice::{coadjoint_flows, NilpotentAlgebra};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(doc) = AlgebraDocument::from_json(text) else {
        return;
    };
    if let Ok(algebra) = NilpotentAlgebra::from_document(&doc) {
        if algebra.dim() <= 16 {
            let flows = coadjoint_flows(&algebra);
            assert_eq!(flows.len(), algebra.dim());
            for flow in &flows {
                assert_eq!(flow.arity(), algebra.dim());
            }
        }
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use perr_core::instance::parse_grid_map;

fuzz_target!(|data: &[u8]| {
    if let Ok(map) = parse_grid_map(data) {
        let text = map.to_map_string();
        let again = parse_grid_map(text.as_bytes()).expect("serialized maps parse");
        assert_eq!(again, map);
        let _ = map.to_graph();
    }
});

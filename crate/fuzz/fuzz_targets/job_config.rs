#![no_main]

use libfuzzer_sys::fuzz_target;
use periodic_kl_cli::config::{FileConfig, JobConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(c) = FileConfig::parse(text) else {
        return;
    };
    if let Ok(job) = JobConfig::resolve(c) {
        let _ = job.check_l();
        let _ = job.root_datum.validate_l();
    }
});

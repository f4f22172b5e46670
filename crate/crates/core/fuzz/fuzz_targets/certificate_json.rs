#![no_main]

use libfuzzer_sys::fuzz_target;
use zskit::config::ConfigCertificate;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cert) = ConfigCertificate::from_json(text) {
        let encoded = cert.to_json();
        let again = ConfigCertificate::from_json(&encoded).expect("canonical output decodes");
        assert_eq!(again, cert);
        assert_eq!(again.to_json(), encoded);
    }
});

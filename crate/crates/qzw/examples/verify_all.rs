fn main() {
    let cfg = qzw::verify::VerifyConfig::default();
    for f in qzw::verify::CHECKS {
        println!("{}", f(&cfg).line());
    }
}

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR");
    let config = cbindgen::Config::from_file("cbindgen.toml").expect("read cbindgen.toml");
    cbindgen::generate_with_config(&crate_dir, config)
        .expect("generate C header")
        .write_to_file("include/gqc.h");
}

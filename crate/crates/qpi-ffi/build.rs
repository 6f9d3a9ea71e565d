//! Generates the C header for the exported ABI into `include/qpi.h`.

fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("cargo sets CARGO_MANIFEST_DIR");

    let mut config = cbindgen::Config::default();
    config.language = cbindgen::Language::C;
    config.cpp_compat = true;
    config.include_guard = Some("QPI_H".to_string());
    config.documentation = true;
    config.enumeration.rename_variants = cbindgen::RenameRule::QualifiedScreamingSnakeCase;
    config.header = Some(
        "/* C interface for the colored-partition identity verification engine. */".to_string(),
    );

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("header generation succeeds")
        .write_to_file(format!("{crate_dir}/include/qpi.h"));

    println!("cargo:rerun-if-changed=src/lib.rs");
}

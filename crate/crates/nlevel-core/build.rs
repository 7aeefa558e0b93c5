use std::path::Path;

// The netlib link line asks for `-lcblas`, but this image ships the cblas
// symbols inside libopenblas with no libcblas.so alias. Provide one in
// OUT_DIR so the final link resolves without touching system directories.
fn main() {
    let out_dir = std::env::var("OUT_DIR").unwrap();
    let alias = Path::new(&out_dir).join("libcblas.so");
    if !alias.exists() {
        for candidate in [
            "/usr/lib/x86_64-linux-gnu/libcblas.so",
            "/usr/lib/x86_64-linux-gnu/libopenblas.so",
            "/usr/lib/libopenblas.so",
        ] {
            if Path::new(candidate).exists() {
                let _ = std::os::unix::fs::symlink(candidate, &alias);
                break;
            }
        }
    }
    println!("cargo:rustc-link-search=native={out_dir}");
}

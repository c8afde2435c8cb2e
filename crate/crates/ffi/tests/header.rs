use std::path::Path;
use std::process::Command;

fn header() -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/decayclock.h");
    std::fs::read_to_string(path).expect("header is generated by the build script")
}

#[test]
fn header_declares_every_export() {
    let h = header();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    for line in src.lines() {
        let Some(rest) = line.split("extern \"C\" fn ").nth(1) else { continue };
        let name = rest.split('(').next().unwrap();
        assert!(h.contains(&format!("{name}(")), "{name} missing from header");
    }
    for tag in ["typedef struct DcAtom DcAtom;", "typedef struct DcClock DcClock;", "DC_STATUS_BUFFER_TOO_SMALL = 5"] {
        assert!(h.contains(tag), "{tag}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(out) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c", "-"])
        .arg("-I")
        .arg(Path::new(env!("CARGO_MANIFEST_DIR")).join("include"))
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child.stdin.take().unwrap().write_all(b"#include \"decayclock.h\"\nint main(void){DcAtom *a=0;return dc_atom_new(0.0,1.0,&a)!=DC_STATUS_OK;}\n")?;
            child.wait_with_output()
        })
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use sosk49_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    sosk49_string_free(s);
    out
}

unsafe fn parse(o: *const Sosk49Order, text: &str) -> *mut Sosk49Element {
    let c = CString::new(text).unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(sosk49_element_parse(o, c.as_ptr(), &mut e), Sosk49Status::Ok);
    e
}

#[test]
fn arithmetic_and_lengths() {
    unsafe {
        let o = sosk49_order_k49();
        let r = parse(o, "r");
        let r2 = parse(o, "r^2");
        let mut prod = ptr::null_mut();
        assert_eq!(sosk49_element_mul(r, r2, &mut prod), Sosk49Status::Ok);
        assert_eq!(take(sosk49_element_to_string(prod)), "1 + 2*r - 1*r^2");

        let seven = sosk49_element_from_coords(o, 7, 0, 0);
        let mut n = 0;
        assert_eq!(sosk49_length(seven, &mut n), Sosk49Status::Ok);
        assert_eq!(n, 4);
        let special = parse(o, "[1,1,1]");
        assert_eq!(sosk49_length(special, &mut n), Sosk49Status::Ok);
        assert_eq!(n, -1);
        assert_eq!(take(sosk49_element_norm(special)), "7");
        assert_eq!(take(sosk49_element_trace(special)), "7");
        let mut tp = false;
        assert_eq!(sosk49_element_is_totally_positive(special, &mut tp), Sosk49Status::Ok);
        assert!(tp);

        let mut s = ptr::null_mut();
        assert_eq!(sosk49_classify_json(special, &mut s), Sosk49Status::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["consistent"], true);
        assert_eq!(sosk49_length_json(seven, &mut s), Sosk49Status::Ok);
        assert!(take(s).contains("\"length\":4"));
        assert_eq!(sosk49_local_json(seven, &mut s), Sosk49Status::Ok);
        assert!(take(s).contains("v2"));

        for e in [r, r2, prod, seven, special] {
            sosk49_element_free(e);
        }
        sosk49_order_free(o);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut o = ptr::null_mut();
        assert_eq!(sosk49_order_new(0, -1, 0, &mut o), Sosk49Status::InvalidOrder);
        assert!(o.is_null());
        let msg = CStr::from_ptr(sosk49_last_error_message()).to_str().unwrap();
        assert!(msg.contains("reducible"), "{msg}");

        let k = sosk49_order_k49();
        let bad = CString::new("1 + 2*x").unwrap();
        let mut e = ptr::null_mut();
        assert_eq!(sosk49_element_parse(k, bad.as_ptr(), &mut e), Sosk49Status::Parse);
        assert_eq!(sosk49_element_parse(ptr::null(), bad.as_ptr(), &mut e), Sosk49Status::NullPointer);
        let mut n = 0;
        assert_eq!(sosk49_length(ptr::null(), &mut n), Sosk49Status::NullPointer);
        assert!(sosk49_element_to_string(ptr::null()).is_null());

        let mut cubic = ptr::null_mut();
        assert_eq!(sosk49_order_new(0, -3, -1, &mut cubic), Sosk49Status::Ok);
        let one = sosk49_element_from_coords(cubic, 1, 0, 0);
        let mut s = ptr::null_mut();
        assert_eq!(sosk49_classify_json(one, &mut s), Sosk49Status::Unsupported);
        let two = sosk49_element_from_coords(k, 2, 0, 0);
        let mut sum = ptr::null_mut();
        assert_eq!(sosk49_element_add(one, two, &mut sum), Sosk49Status::Arithmetic);
        let msg = CStr::from_ptr(sosk49_status_message(Sosk49Status::Arithmetic)).to_str().unwrap();
        assert_eq!(msg, "arithmetic error");

        sosk49_element_free(one);
        sosk49_element_free(two);
        sosk49_order_free(cubic);
        sosk49_order_free(k);
        sosk49_string_free(ptr::null_mut());
    }
}

fn header() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/sosk49.h")).unwrap()
}

#[test]
fn header_declares_exports() {
    let h = header();
    for name in [
        "sosk49_order_new",
        "sosk49_order_k49",
        "sosk49_order_free",
        "sosk49_element_parse",
        "sosk49_element_from_coords",
        "sosk49_element_free",
        "sosk49_element_to_string",
        "sosk49_element_add",
        "sosk49_element_mul",
        "sosk49_element_is_totally_positive",
        "sosk49_element_norm",
        "sosk49_element_trace",
        "sosk49_length",
        "sosk49_length_json",
        "sosk49_classify_json",
        "sosk49_local_json",
        "sosk49_string_free",
        "sosk49_last_error_message",
        "sosk49_status_message",
    ] {
        assert!(h.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(h.contains("typedef struct Sosk49Order Sosk49Order;"));
    assert!(h.contains("SOSK49_STATUS_OK = 0"));
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let src = std::env::temp_dir().join(format!("sosk49_header_{}.c", std::process::id()));
    std::fs::write(&src, "#include \"sosk49.h\"\nint main(void) { return sosk49_order_k49() == 0; }\n").unwrap();
    let out = Command::new(cc).args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"]).arg(&dir).arg(&src).output().unwrap();
    let _ = std::fs::remove_file(&src);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn which_cc() -> Result<&'static str, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc);
        }
    }
    Err(())
}

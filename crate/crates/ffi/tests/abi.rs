use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use frac_total_ffi::*;

const K4: &str = "p 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n";

fn parse(text: &str) -> (FtStatus, *mut FtGraph) {
    let c = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    let status = unsafe { ft_graph_parse(c.as_ptr(), &mut g) };
    (status, g)
}

fn last_error() -> String {
    let p = ft_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ft_string_free(s) };
    out
}

#[test]
fn graph_round_trip() {
    let (status, g) = parse(K4);
    assert_eq!(status, FtStatus::Ok);
    unsafe {
        assert_eq!(ft_graph_vertex_count(g), 4);
        assert_eq!(ft_graph_edge_count(g), 6);
        assert_eq!(ft_graph_girth(g), 3);
        ft_graph_free(g);
    }
}

#[test]
fn parse_errors_carry_a_message() {
    let (status, g) = parse("p 2 1\ne 1 3\n");
    assert_eq!(status, FtStatus::Parse);
    assert!(g.is_null());
    assert!(last_error().contains("out of range"));
}

#[test]
fn null_arguments_are_rejected() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ft_graph_parse(ptr::null(), &mut g) }, FtStatus::NullPointer);
    assert_eq!(unsafe { ft_graph_vertex_count(ptr::null()) }, 0);
    unsafe {
        ft_graph_free(ptr::null_mut());
        ft_table_free(ptr::null_mut());
        ft_string_free(ptr::null_mut());
    }
}

#[test]
fn first_level_of_the_table() {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { ft_table_new(3, 1, 1, 3, &mut t) }, FtStatus::Ok);
    unsafe {
        assert_eq!(ft_table_levels(t), 3);
        let (mut p, mut q) = (0.0, 0.0);
        assert_eq!(ft_table_get(t, 1, &mut p, &mut q), FtStatus::Ok);
        assert!((2.0 * p + q - 1.0).abs() < 1e-12);
        let (mut ps, mut qs) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(ft_table_get_exact(t, 1, &mut ps, &mut qs), FtStatus::Ok);
        assert_eq!(take_string(ps), "3/8");
        assert_eq!(take_string(qs), "1/4");
        assert_eq!(ft_table_get(t, 4, &mut p, &mut q), FtStatus::OutOfRange);
        assert_eq!(ft_table_get(t, 0, &mut p, &mut q), FtStatus::OutOfRange);
        let (mut p_star, mut q_star) = (0.0, 0.0);
        assert_eq!(ft_table_means(t, &mut p_star, &mut q_star), FtStatus::Ok);
        assert!((2.0 * p_star + q_star - 1.0).abs() < 1e-12);
        ft_table_free(t);
    }
}

#[test]
fn table_rejects_zero_denominator() {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { ft_table_new(3, 1, 0, 3, &mut t) }, FtStatus::Precondition);
    assert!(t.is_null());
}

#[test]
fn chift_of_k4() {
    let (_, g) = parse(K4);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ft_fractional_total_chromatic(g, &mut out) }, FtStatus::Ok);
    assert_eq!(take_string(out), "5/1");
    unsafe { ft_graph_free(g) };
}

#[test]
fn sampler_on_petersen_is_clean() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ft_graph_petersen(&mut g) }, FtStatus::Ok);
    let mut violations = u64::MAX;
    let status = unsafe { ft_sample_check(g, 3, 1, 1, 4, 500, 7, &mut violations) };
    assert_eq!(status, FtStatus::Ok, "{}", last_error());
    assert_eq!(violations, 0);
    let status = unsafe { ft_sample_check(g, 3, 1, 1, 4, 0, 7, &mut violations) };
    assert_eq!(status, FtStatus::Precondition);
    unsafe { ft_graph_free(g) };
}

#[test]
fn status_names() {
    let name = unsafe { CStr::from_ptr(ft_status_name(FtStatus::Budget)) };
    assert_eq!(name.to_str().unwrap(), "budget exhausted");
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/frac_total.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for symbol in ["ft_graph_parse", "ft_table_get_exact", "ft_sample_check", "FT_STATUS_OUT_OF_RANGE"] {
        assert!(text.contains(symbol), "{symbol} missing from header");
    }
    let Ok(cc) = which_cc() else { return };
    let dir = tempfile_dir();
    let src = dir.join("probe.c");
    std::fs::write(&src, "#include \"frac_total.h\"\nint main(void) { return FT_STATUS_OK; }\n").unwrap();
    let status = Command::new(cc)
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg(format!("-I{}", header.parent().unwrap().display()))
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<String, ()> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    match Command::new(&cc).arg("--version").output() {
        Ok(o) if o.status.success() => Ok(cc),
        _ => Err(()),
    }
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("frac-total-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

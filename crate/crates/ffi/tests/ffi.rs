use std::ffi::CStr;
use std::f64::consts::FRAC_PI_8;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use geogate_ffi::*;

fn take(status: GeogateStatus, u: *mut GeogateUnitary) -> *mut GeogateUnitary {
    assert_eq!(status, GeogateStatus::Ok, "{}", last_error());
    assert!(!u.is_null());
    u
}

fn last_error() -> String {
    let p = geogate_last_error();
    if p.is_null() {
        String::new()
    } else {
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }
}

fn standard(which: GeogateStandardGate) -> *mut GeogateUnitary {
    let mut u = ptr::null_mut();
    take(unsafe { geogate_standard_gate(which as u32, &mut u) }, u)
}

fn distance(a: *const GeogateUnitary, b: *const GeogateUnitary) -> f64 {
    let mut d = f64::NAN;
    assert_eq!(unsafe { geogate_distance(a, b, &mut d) }, GeogateStatus::Ok);
    d
}

#[test]
fn berry_and_aa_gates_reach_pi8() {
    let target = standard(GeogateStandardGate::Pi8);
    let (mut berry, mut aa) = (ptr::null_mut(), ptr::null_mut());
    let mut d_berry = f64::NAN;
    take(unsafe { geogate_berry_gate(-FRAC_PI_8, 1.0, 0.0, 0.0, &mut berry, &mut d_berry) }, berry);
    take(unsafe { geogate_aa_gate(-FRAC_PI_8, 1.0, -1.0, 0.0, &mut aa, ptr::null_mut()) }, aa);
    assert!(d_berry <= 1e-12);
    assert!(distance(berry, target) <= 1e-12);
    assert!(distance(aa, target) <= 1e-9);
    unsafe {
        geogate_unitary_free(berry);
        geogate_unitary_free(aa);
        geogate_unitary_free(target);
    }
}

#[test]
fn hybrid_sequence_is_cz_in_cnot_class() {
    let h = {
        let mut u = ptr::null_mut();
        take(unsafe { geogate_hybrid_cnot(&mut u) }, u)
    };
    let cz = standard(GeogateStandardGate::Cz);
    assert!(distance(h, cz) <= 1e-12);
    let (mut re, mut im, mut g2) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { geogate_makhlin(h, &mut re, &mut im, &mut g2) }, GeogateStatus::Ok);
    assert!(re.abs() < 1e-12 && im.abs() < 1e-12 && (g2 - 1.0).abs() < 1e-12);
    let (mut ok, mut defect) = (true, 0.0);
    assert_eq!(unsafe { geogate_factorization(h, &mut ok, &mut defect) }, GeogateStatus::Ok);
    assert!(!ok && defect > 1.0);
    unsafe {
        geogate_unitary_free(h);
        geogate_unitary_free(cz);
    }
}

#[test]
fn exchange_at_pi_is_swap_and_composes() {
    let (mut half, mut full) = (ptr::null_mut(), ptr::null_mut());
    take(unsafe { geogate_exchange_gate(1.0, std::f64::consts::FRAC_PI_2, &mut half) }, half);
    take(unsafe { geogate_exchange_gate(2.0, std::f64::consts::FRAC_PI_2, &mut full) }, full);
    let mut twice = ptr::null_mut();
    take(unsafe { geogate_unitary_then(half, half, &mut twice) }, twice);
    let swap = standard(GeogateStandardGate::Swap);
    assert!(distance(full, swap) <= 1e-12);
    assert!(distance(twice, swap) <= 1e-12);
    assert_eq!(unsafe { geogate_unitary_dim(twice) }, 4);
    for u in [half, full, twice, swap] {
        unsafe { geogate_unitary_free(u) };
    }
}

#[test]
fn entries_round_trip() {
    let h = standard(GeogateStandardGate::Hadamard);
    let (mut re, mut im) = ([0.0; 4], [0.0; 4]);
    assert_eq!(unsafe { geogate_unitary_entries(h, re.as_mut_ptr(), im.as_mut_ptr(), 4) }, GeogateStatus::Ok);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert_eq!(re, [s, s, s, -s]);
    let mut copy = ptr::null_mut();
    take(unsafe { geogate_unitary_new(2, re.as_ptr(), im.as_ptr(), &mut copy) }, copy);
    assert_eq!(distance(h, copy), 0.0);
    let mut small = [0.0; 2];
    let st = unsafe { geogate_unitary_entries(h, small.as_mut_ptr(), small.as_mut_ptr(), 2) };
    assert_eq!(st, GeogateStatus::DimensionMismatch);
    unsafe {
        geogate_unitary_free(h);
        geogate_unitary_free(copy);
    }
}

#[test]
fn phases_match_closed_forms() {
    let (b0, b1) = (0.3, 0.8);
    let mag = f64::hypot(b0, b1);
    let mut g = 0.0;
    assert_eq!(unsafe { geogate_single_berry_phase(b0, b1, 1.0, 0, 10_000, &mut g) }, GeogateStatus::Ok);
    let solid = std::f64::consts::TAU * (1.0 - b0 / mag);
    let wrap = |x: f64| (x + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;
    assert!(wrap(g.abs() - solid / 2.0).abs() < 1e-6 || wrap(g.abs() + solid / 2.0).abs() < 1e-6, "{g}");

    let (mut phases, mut defect) = ([0.0; 4], f64::NAN);
    let st = unsafe {
        geogate_two_qubit_audit(GeogateMechanism::Berry as u32, b0, b1, 1.0, 1.0, 2.0, 0.5, phases.as_mut_ptr(), &mut defect)
    };
    assert_eq!(st, GeogateStatus::Ok);
    let g1 = wrap(std::f64::consts::TAU * b0 / mag);
    assert!((wrap(phases[0] - g1)).abs() < 1e-6 && phases[1].abs() < 1e-6 && phases[2].abs() < 1e-6);
    assert!(defect <= 1e-8);
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut u = ptr::null_mut();
    assert_eq!(unsafe { geogate_berry_gate(7.0, 1.0, 0.0, 0.0, &mut u, ptr::null_mut()) }, GeogateStatus::Unreachable);
    assert!(u.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { geogate_aa_gate(-FRAC_PI_8, 1.0, 1.0, 0.0, &mut u, ptr::null_mut()) }, GeogateStatus::Unreachable);
    assert_eq!(unsafe { geogate_standard_gate(99, &mut u) }, GeogateStatus::InvalidArgument);
    assert_eq!(unsafe { geogate_standard_gate(0, ptr::null_mut()) }, GeogateStatus::NullPointer);
    let mut g = 0.0;
    assert_eq!(unsafe { geogate_single_berry_phase(0.3, 0.8, 1.0, 0, 10, &mut g) }, GeogateStatus::InvalidArgument);
    let re = [1.0, 1.0, 0.0, 1.0];
    let im = [0.0; 4];
    assert_eq!(unsafe { geogate_unitary_new(2, re.as_ptr(), im.as_ptr(), &mut u) }, GeogateStatus::NotUnitary);
    assert_eq!(unsafe { geogate_unitary_new(3, re.as_ptr(), im.as_ptr(), &mut u) }, GeogateStatus::DimensionMismatch);
    // success clears the message
    let h = standard(GeogateStandardGate::Cnot);
    assert!(geogate_last_error().is_null());
    unsafe { geogate_unitary_free(h) };
    unsafe { geogate_unitary_free(ptr::null_mut()) };
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/geogate.h");
    assert!(header.exists(), "build script did not write the header");
    // the library built for this test run sits next to the test binary
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let staticlib = deps.join("libgeogate_ffi.a");
    assert!(staticlib.exists(), "missing {}", staticlib.display());
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("smoke.c");
    let exe = tmp.join("smoke");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "geogate.h"
int main(void) {
    GeogateUnitary *h = NULL, *cz = NULL;
    double d = 1.0;
    if (geogate_hybrid_cnot(&h) != GEOGATE_STATUS_OK) return 2;
    if (geogate_standard_gate(GEOGATE_STANDARD_GATE_CZ, &cz) != GEOGATE_STATUS_OK) return 3;
    if (geogate_distance(h, cz, &d) != GEOGATE_STATUS_OK) return 4;
    if (geogate_standard_gate(42, &cz) != GEOGATE_STATUS_INVALID_ARGUMENT) return 5;
    printf("%s %.3e %s\n", geogate_version(), d, geogate_last_error());
    geogate_unitary_free(h);
    geogate_unitary_free(cz);
    return d <= 1e-12 ? 0 : 1;
}
"#,
    )
    .unwrap();
    let cc = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("C compiler available");
    assert!(cc.status.success(), "{}", String::from_utf8_lossy(&cc.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).contains("unknown gate 42"));
}

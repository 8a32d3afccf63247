use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use cavity_hubbard_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(phases_last_error()) }.to_string_lossy().into_owned()
}

fn fig7_model() -> *mut PhasesModel {
    let mut m = ptr::null_mut();
    let st = unsafe { phases_model_new_scaled(250.0, 250.0, 15.0, 15.0, 25.0, 100.0, 100.0, 0.0, 100.0, &mut m) };
    assert_eq!(st, PhasesStatus::Ok);
    assert!(!m.is_null());
    m
}

#[test]
fn cavity_windows_through_the_abi() {
    let m = fig7_model();
    let mut w = PhasesWindow::default();
    let st = unsafe { phases_window(m, PhasesVariant::Cavity as u32, PhasesSpecies::Ground as u32, 1, 1, 1.0, &mut w) };
    assert_eq!(st, PhasesStatus::Ok);
    assert_eq!((w.present, w.mu_minus, w.mu_plus), (1, 165.0, 240.0));
    let st = unsafe { phases_window(m, PhasesVariant::Cavity as u32, PhasesSpecies::Excited as u32, 1, 1, 1.0, &mut w) };
    assert_eq!(st, PhasesStatus::Ok);
    assert!((w.mu_minus - (140.0 - 0.5 * 12500f64.sqrt())).abs() < 1e-9);
    unsafe { phases_model_free(m) };
}

#[test]
fn physical_parameters_are_scaled() {
    let p = PhasesPhysical {
        j_g: 2.0,
        j_e: 2.0,
        u_g: 40.0,
        u_e: 40.0,
        u_eg: 0.0,
        f_sq: 0.0,
        eps_g: 0.0,
        eps_e: 0.0,
        eps_c: 10.0,
        z: 1,
    };
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { phases_model_from_physical(&p, &mut m) }, PhasesStatus::Ok);
    let (mut a, mut b) = (PhasesWindow::default(), PhasesWindow::default());
    unsafe {
        assert_eq!(phases_window(m, PhasesVariant::Single as u32, 0, 1, 0, 0.0, &mut a), PhasesStatus::Ok);
        assert_eq!(phases_single_window(1, 20.0, &mut b), PhasesStatus::Ok);
        phases_model_free(m);
    }
    assert_eq!(a, b);
    assert!((b.mu_minus - 0.5 * (19.0 - 281f64.sqrt())).abs() < 1e-12);
}

#[test]
fn sub_tip_window_is_absent_not_an_error() {
    let mut w = PhasesWindow { present: 9, mu_minus: 1.0, mu_plus: 2.0 };
    assert_eq!(unsafe { phases_single_window(1, 1.0, &mut w) }, PhasesStatus::Ok);
    assert_eq!(w.present, 0);
}

#[test]
fn errors_map_to_status_codes() {
    let m = fig7_model();
    let mut w = PhasesWindow::default();
    unsafe {
        assert_eq!(phases_window(ptr::null(), 0, 0, 1, 0, 0.0, &mut w), PhasesStatus::NullPointer);
        assert_eq!(phases_window(m, 9, 0, 1, 1, 1.0, &mut w), PhasesStatus::InvalidArgument);
        assert!(last_error().contains("variant code 9"));
        assert_eq!(phases_window(m, 2, 7, 1, 1, 1.0, &mut w), PhasesStatus::InvalidArgument);
        assert_eq!(phases_window(m, 2, 1, 1, 0, 1.0, &mut w), PhasesStatus::EmptySpecies);
        assert_eq!(phases_window(m, 2, 0, 1, 1, -1.0, &mut w), PhasesStatus::InvalidArgument);
        let (mut cg, mut ce) = (0.0, 0.0);
        // mu_g on the zero of the first hopping denominator: u_g n_g + u_eg n_e
        assert_eq!(phases_residual(m, 1, 1, 1.0, 265.0, 0.0, &mut cg, &mut ce), PhasesStatus::Numerical);
        assert!(last_error().contains("pole"), "{}", last_error());
        assert_eq!(phases_residual(m, 1, 1, 1.0, 200.0, 112.0, &mut cg, &mut ce), PhasesStatus::Ok);
        assert_eq!(last_error(), "");
        phases_model_free(m);

        let mut s = ptr::null_mut();
        assert_eq!(
            phases_model_new_scaled(20.0, 20.0, 20.0, 20.0, 5.0, 40.0, 40.0, 0.0, 0.0, &mut s),
            PhasesStatus::Ok
        );
        assert_eq!(phases_window(s, 3, 0, 1, 1, 1.0, &mut w), PhasesStatus::Numerical);
        phases_model_free(s);
        assert_eq!(
            phases_model_new_scaled(1.0, 1.0, 0.0, 0.0, -1.0, 1.0, 1.0, 0.0, 0.0, &mut s),
            PhasesStatus::InvalidArgument
        );
        let msg = CStr::from_ptr(phases_status_message(PhasesStatus::Numerical as u32));
        assert!(msg.to_str().unwrap().starts_with("numerical"));
        assert_eq!(CStr::from_ptr(phases_status_message(99)).to_str().unwrap(), "unknown status");
        phases_model_free(ptr::null_mut());
    }
}

#[test]
fn oracle_runs_through_the_abi() {
    let mut passed = 0;
    assert_eq!(unsafe { phases_oracle_verify(3, 10, &mut passed) }, PhasesStatus::Ok);
    assert_eq!(passed, 10);
}

#[test]
fn figure_grid_handles() {
    let id = CString::new("fig7").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(phases_figure_scan(id.as_ptr(), 51, 61, &mut g), PhasesStatus::Ok);
        let (mut nx, mut nmu, mut layers) = (0, 0, 0);
        assert_eq!(phases_grid_shape(g, &mut nx, &mut nmu, &mut layers), PhasesStatus::Ok);
        assert_eq!((nx, nmu, layers), (51, 61, 1));
        // fig7 nodes: u in [0, 500] step 10, mu in [0, 600] step 10
        let (mut x, mut mu) = (0.0, 0.0);
        assert_eq!(phases_grid_node(g, 25, 20, &mut x, &mut mu), PhasesStatus::Ok);
        assert_eq!((x, mu), (250.0, 200.0));
        let mut label = PhasesLabel::Superfluid;
        assert_eq!(phases_grid_label(g, 0, 25, 20, &mut label), PhasesStatus::Ok);
        assert_eq!(label, PhasesLabel::MottSuperfluid);
        assert_eq!(phases_grid_label(g, 0, 25, 18, &mut label), PhasesStatus::Ok);
        assert_eq!(label, PhasesLabel::MottInsulator);
        assert_eq!(phases_grid_label(g, 1, 0, 0, &mut label), PhasesStatus::InvalidArgument);
        phases_grid_free(g);

        let bad = CString::new("fig2").unwrap();
        assert_eq!(phases_figure_scan(bad.as_ptr(), 10, 10, &mut g), PhasesStatus::UnknownFigure);
        assert_eq!(phases_figure_scan(id.as_ptr(), 1, 10, &mut g), PhasesStatus::InvalidArgument);
    }
}

#[test]
fn header_is_current_and_compiles_as_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/phases.h")).unwrap();
    for name in ["phases_model_new_scaled", "phases_window", "phases_figure_scan", "phases_grid_free", "PHASES_STATUS_NUMERICAL"] {
        assert!(header.contains(name), "header lacks {name}");
    }
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(dir.join("include/phases.h"))
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "phases.h"

int main(void) {
    PhasesModel *m = NULL;
    if (phases_model_new_scaled(250, 250, 15, 15, 25, 100, 100, 0, 100, &m) != PHASES_STATUS_OK) return 1;
    PhasesWindow w;
    if (phases_window(m, PHASES_VARIANT_CAVITY, PHASES_SPECIES_GROUND, 1, 1, 1.0, &w) != PHASES_STATUS_OK) return 2;
    printf("%d %.6f %.6f\n", w.present, w.mu_minus, w.mu_plus);
    enum PhasesStatus st = phases_window(m, PHASES_VARIANT_CAVITY, PHASES_SPECIES_EXCITED, 1, 0, 1.0, &w);
    printf("%d %s\n", (int)st, phases_last_error());
    phases_model_free(m);
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // test binaries live in <target>/<profile>/deps; the static library one level up
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().and_then(|d| d.parent()).unwrap().join("libcavity_hubbard_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let work = tempfile::tempdir().unwrap();
    let src = work.path().join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = work.path().join("main");
    let built = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(built.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "1 165.000000 240.000000\n4 excited occupancy is zero; no Mott window is defined for an empty species\n"
    );
}

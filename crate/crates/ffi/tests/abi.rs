use std::ffi::{CStr, CString};
use std::ptr;

use qheat_ffi::*;

fn last_error() -> String {
    let p = qheat_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn scenario_state_round_trip() {
    unsafe {
        let name = CString::new("correlated_phi_pi").unwrap();
        let mut state = ptr::null_mut();
        assert_eq!(qheat_state_new_scenario(name.as_ptr(), 1000.0, &mut state), QheatStatus::Ok);
        assert!(qheat_last_error().is_null());

        let mut dim = 0;
        assert_eq!(qheat_state_dim(state, &mut dim), QheatStatus::Ok);
        assert_eq!(dim, 4);

        let (mut re, mut im) = ([0.0; 16], [0.0; 16]);
        assert_eq!(qheat_state_copy_matrix(state, re.as_mut_ptr(), im.as_mut_ptr(), 16), QheatStatus::Ok);
        assert!((re[1 * 4 + 2] + 0.19).abs() < 1e-15);
        assert_eq!(
            qheat_state_copy_matrix(state, re.as_mut_ptr(), im.as_mut_ptr(), 15),
            QheatStatus::BufferTooSmall
        );

        let mut d = 0.0;
        assert_eq!(qheat_geometric_discord(state, &mut d), QheatStatus::Ok);
        assert!((d - 0.1444).abs() < 1e-9);

        let mut later = ptr::null_mut();
        assert_eq!(qheat_state_evolve(state, 1.1047619047619048, 215.1, &mut later), QheatStatus::Ok);
        let mut mi = 0.0;
        assert_eq!(qheat_mutual_information(later, &mut mi), QheatStatus::Ok);
        assert!((mi - 0.04941).abs() < 1e-4, "{mi}");

        qheat_state_free(later);
        qheat_state_free(state);
        qheat_state_free(ptr::null_mut());
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let bad = CString::new("nope").unwrap();
        let mut state = ptr::null_mut();
        assert_eq!(qheat_state_new_scenario(bad.as_ptr(), 1000.0, &mut state), QheatStatus::InvalidArgument);
        assert!(state.is_null());
        assert!(last_error().contains("unknown scenario"));

        assert_eq!(qheat_state_new_scenario(ptr::null(), 1000.0, &mut state), QheatStatus::NullPointer);
        assert!(last_error().contains("name"));

        assert_eq!(
            qheat_state_new_correlated(0.3, 0.2, 0.5, 0.0, 1000.0, &mut state),
            QheatStatus::InvalidArgument
        );
        assert!(last_error().contains("bound"), "{}", last_error());

        let mut checks = 0;
        let cfg = CString::new(r#"{"bogus": true}"#).unwrap();
        assert_eq!(qheat_run_config(cfg.as_ptr(), &mut checks), QheatStatus::Config);
        assert!(last_error().contains("bogus"));
    }
}

#[test]
fn ledger_rows() {
    unsafe {
        let name = CString::new("uncorrelated").unwrap();
        let mut ledger = ptr::null_mut();
        assert_eq!(qheat_ledger_run(name.as_ptr(), 22, 2.32, 215.1, 1000.0, &mut ledger), QheatStatus::Ok);
        let mut n = 0;
        assert_eq!(qheat_ledger_len(ledger, &mut n), QheatStatus::Ok);
        assert_eq!(n, 22);
        let mut row = QheatThermoRow::default();
        for i in 0..n {
            assert_eq!(qheat_ledger_row(ledger, i, &mut row), QheatStatus::Ok);
            assert!(row.eq5_residual.abs() < 1e-9);
            assert!(row.q_b >= -1e-15);
        }
        assert_eq!(qheat_ledger_row(ledger, n, &mut row), QheatStatus::InvalidArgument);
        qheat_ledger_free(ledger);
    }
}

#[test]
fn collision_trace() {
    unsafe {
        let mut params = std::mem::zeroed::<QheatCollisionParams>();
        assert_eq!(qheat_collision_params_default(&mut params), QheatStatus::Ok);
        assert!((params.hot_p1 - 0.3).abs() < 1e-12 && (params.cold_p1 - 0.2).abs() < 1e-12);
        params.n_bath = 2;
        params.steps = 300;
        params.seed = 3;
        params.alpha = 0.0336f64.sqrt();

        let mut trace = ptr::null_mut();
        assert_eq!(qheat_collision_run(&params, &mut trace), QheatStatus::Ok);
        let mut summary = QheatTraceSummary::default();
        assert_eq!(qheat_trace_summary(trace, &mut summary), QheatStatus::Ok);
        assert_eq!(summary.steps, 300);
        assert!(summary.max_energy_drift < 1e-9);

        let mut energies = vec![0.0; 301];
        assert_eq!(qheat_trace_system_energies(trace, 0, energies.as_mut_ptr(), 301), QheatStatus::Ok);
        assert_eq!(energies[0], summary.e_hot_init);
        assert_eq!(
            qheat_trace_system_energies(trace, 1, energies.as_mut_ptr(), 300),
            QheatStatus::BufferTooSmall
        );
        let mut crossings = usize::MAX;
        assert_eq!(qheat_trace_crossings(trace, 0, &mut crossings), QheatStatus::Ok);
        assert!(crossings < usize::MAX);
        qheat_trace_free(trace);

        params.n_bath = 20;
        assert_eq!(qheat_collision_run(&params, &mut trace), QheatStatus::Config);
    }
}

#[test]
fn run_config_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let json = format!(r#"{{"scenario": "uncorrelated", "output_dir": {:?}}}"#, dir.path());
    let cfg = CString::new(json).unwrap();
    let mut checks = -1;
    unsafe {
        assert_eq!(qheat_run_config(cfg.as_ptr(), &mut checks), QheatStatus::Ok);
    }
    assert_eq!(checks, 1);
    assert!(dir.path().join("thermo.csv").exists());
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(qheat_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

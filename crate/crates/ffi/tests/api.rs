use std::ffi::CStr;
use std::ptr;

use igci_ffi::*;

fn last_error() -> Option<String> {
    let p = igci_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn new_pair(x: &[f64], y: &[f64]) -> Result<*mut IgciPair, IgciStatus> {
    assert_eq!(x.len(), y.len());
    let mut h = ptr::null_mut();
    match unsafe { igci_pair_new(x.as_ptr(), y.as_ptr(), x.len(), &mut h) } {
        IgciStatus::Ok => Ok(h),
        s => Err(s),
    }
}

#[test]
fn score_matches_library() {
    let x: Vec<f64> = (0..200).map(|i| ((i * 37) % 200) as f64 / 199.0).collect();
    let y: Vec<f64> = x.iter().map(|v| v * v * v).collect();
    let h = new_pair(&x, &y).unwrap();
    assert_eq!(unsafe { igci_pair_len(h) }, 200);
    let mut rep = IgciReport {
        c_xy: 0.0,
        c_yx: 0.0,
        direction: IgciDirection::Undecided,
        estimator: IgciEstimator::Entropy,
        reference: IgciReference::Uniform,
        m_used: 0,
    };
    for (est, kind) in [
        (0, igci::EstimatorKind::EntropySpacing),
        (1, igci::EstimatorKind::SlopeIntegral),
    ] {
        let status = unsafe { igci_score(h, IgciReference::Gaussian as i32, est, &mut rep) };
        assert_eq!(status, IgciStatus::Ok);
        let pair = igci::SamplePair::new(x.clone(), y.clone()).unwrap();
        let want = igci::igci_score(&pair, igci::ReferenceFamily::Gaussian, kind).unwrap();
        assert_eq!(rep.c_xy, want.c_xy);
        assert_eq!(rep.c_yx, -rep.c_xy);
        assert_eq!(rep.m_used, want.m_used);
        assert_eq!(rep.reference, IgciReference::Gaussian);
        assert_eq!(rep.direction, IgciDirection::XToY);
    }
    unsafe { igci_pair_free(h) };
}

#[test]
fn pair_validation_errors() {
    assert_eq!(
        new_pair(&[1.0, 2.0], &[1.0, 2.0]),
        Err(IgciStatus::DataError)
    );
    assert!(last_error().unwrap().contains('3'));
    assert_eq!(
        new_pair(&[1.0, f64::NAN, 2.0], &[1.0, 2.0, 3.0]),
        Err(IgciStatus::DataError)
    );
    let x = [1.0, 2.0, 3.0];
    let status = unsafe { igci_pair_new(x.as_ptr(), ptr::null(), 3, &mut ptr::null_mut()) };
    assert_eq!(status, IgciStatus::NullPointer);
    let status = unsafe { igci_pair_new(x.as_ptr(), x.as_ptr(), 3, ptr::null_mut()) };
    assert_eq!(status, IgciStatus::NullPointer);
}

#[test]
fn score_rejects_bad_arguments() {
    let x = [0.0, 0.3, 0.7, 1.0];
    let h = new_pair(&x, &x).unwrap();
    let mut rep = std::mem::MaybeUninit::<IgciReport>::uninit();
    assert_eq!(
        unsafe { igci_score(h, 7, 0, rep.as_mut_ptr()) },
        IgciStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { igci_score(h, 0, 9, rep.as_mut_ptr()) },
        IgciStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { igci_score(ptr::null(), 0, 0, rep.as_mut_ptr()) },
        IgciStatus::NullPointer
    );
    assert_eq!(
        unsafe { igci_score(h, 0, 0, ptr::null_mut()) },
        IgciStatus::NullPointer
    );
    assert_eq!(
        unsafe { igci_score(h, 0, 0, rep.as_mut_ptr()) },
        IgciStatus::Ok
    );
    let rep = unsafe { rep.assume_init() };
    assert_eq!(rep.direction, IgciDirection::Undecided);
    unsafe { igci_pair_free(h) };
    unsafe { igci_pair_free(ptr::null_mut()) };
}

#[test]
fn scalar_functions() {
    let mut v = 0.0;
    assert_eq!(
        unsafe { igci_spacing_entropy([0.0, 0.5, 1.0].as_ptr(), 3, &mut v) },
        IgciStatus::Ok
    );
    let want = igci::spacing_entropy(&[0.0, 0.5, 1.0]).unwrap();
    assert_eq!(v, want);
    let (x, y) = ([0.0, 0.5, 1.0], [0.0, 0.25, 1.0]);
    assert_eq!(
        unsafe { igci_slope_criterion(x.as_ptr(), y.as_ptr(), 3, &mut v) },
        IgciStatus::Ok
    );
    assert_eq!(v, igci::slope_criterion(&x, &y).unwrap());
    assert_eq!(
        unsafe { igci_spacing_entropy([1.0; 4].as_ptr(), 4, &mut v) },
        IgciStatus::DataError
    );
    assert_eq!(
        unsafe { igci_digamma(0.0, &mut v) },
        IgciStatus::NumericError
    );
}

#[test]
fn lag_alignment() {
    let a: Vec<f64> = (0..100).map(|i| ((i * i) % 17) as f64).collect();
    let mut b = vec![0.0, 5.0, 2.0];
    b.extend_from_slice(&a[..97]);
    let mut out = IgciLagAlignment {
        lag: 0,
        correlation: 0.0,
        overlap_length: 0,
    };
    let status = unsafe { igci_align_lag(a.as_ptr(), a.len(), b.as_ptr(), b.len(), 10, &mut out) };
    assert_eq!(status, IgciStatus::Ok);
    assert_eq!(out.lag, 3);
    assert!((out.correlation - 1.0).abs() < 1e-12);
    assert_eq!(out.overlap_length, 97);
}

#[test]
fn names_and_version() {
    let name = unsafe { CStr::from_ptr(igci_status_name(IgciStatus::DataError as i32)) };
    assert_eq!(name.to_str().unwrap(), "data error");
    let unknown = unsafe { CStr::from_ptr(igci_status_name(42)) };
    assert_eq!(unknown.to_str().unwrap(), "unknown");
    let v = unsafe { CStr::from_ptr(igci_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn errors_are_per_thread() {
    let mut v = 0.0;
    assert_eq!(
        unsafe { igci_digamma(-3.0, &mut v) },
        IgciStatus::NumericError
    );
    std::thread::spawn(|| assert!(last_error().is_none()))
        .join()
        .unwrap();
    assert!(last_error().is_some());
}

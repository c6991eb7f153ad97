use super::*;
use crate::distzoo::parse_dist_spec;
use crate::exactmath::{int, rat, Polynomial};
use crate::seqcore::{Interval, PrimitiveSeq};

fn gseq(v: &[Rational]) -> NormalizedSeq {
    NormalizedSeq::from_raw(v.to_vec()).unwrap()
}

fn unit_prefix(gamma: &[Rational]) -> PrimitiveSeq {
    let eps = crate::seqcore::eps_from_gamma(&Interval::unit(), gamma);
    PrimitiveSeq::from_raw(Interval::unit(), eps).unwrap()
}

#[test]
fn difference_table_uniform() {
    let t = difference_table(&gseq(&[int(1), rat(1, 2), rat(1, 3), rat(1, 4)]), 3);
    assert_eq!(t.rows()[1], vec![rat(1, 2), rat(1, 6), rat(1, 12)]);
    assert_eq!(t.rows()[2], vec![rat(1, 3), rat(1, 12)]);
    assert_eq!(t.rows()[3], vec![rat(1, 4)]);
    let c = difference_table(&gseq(&vec![int(1); 5]), 4);
    assert!(c.rows()[1..].iter().flatten().all(|v| *v == int(0)));
    let d = difference_table(&gseq(&[int(1), int(0), int(0)]), 2);
    assert_eq!(d.rows()[1], vec![int(1), int(0)]);
}

#[test]
fn difference_rows_telescope() {
    let g = gseq(&[int(1), rat(1, 2), rat(1, 3), rat(1, 4), rat(1, 5)]);
    let t = difference_table(&g, 4);
    for k in 1..=t.depth() {
        let sum: Rational = t.rows()[k].iter().sum();
        let prev = &t.rows()[k - 1];
        assert_eq!(sum, &prev[0] - prev.last().unwrap());
    }
}

#[test]
fn cm_examples() {
    assert!(check_cm_prefix(&gseq(&[int(1), rat(1, 2), rat(1, 3), rat(1, 4)])).is_empty());
    assert!(check_cm_prefix(&gseq(&[int(1), rat(1, 2), rat(1, 5)])).is_empty());
    let v = check_cm_prefix(&gseq(&[int(1), rat(1, 4), rat(1, 2)]));
    assert!(v.iter().any(|c| c.n == 1 && c.k == 1 && c.value == rat(-1, 4)));
}

#[test]
fn hankel_examples() {
    let r = hankel_check(&gseq(&[int(1), rat(1, 2), rat(1, 5)]));
    assert!(!r.passes());
    let h = r.blocks.iter().find(|b| b.family == HankelFamily::Plain).unwrap();
    assert_eq!(h.charpoly[0], rat(1, 5) - rat(1, 4));
    let r = hankel_check(&gseq(&[int(1), rat(1, 2), rat(1, 4)]));
    assert!(r.passes());
    assert_eq!(r.blocks[0].charpoly[0], int(0));
    let u: Vec<Rational> = (0..=4).map(|n| rat(1, n + 1)).collect();
    assert!(hankel_check(&gseq(&u)).passes());
}

#[test]
fn psd_routes_agree() {
    let cases = [
        vec![vec![int(1), int(2)], vec![int(2), int(1)]],
        vec![vec![int(0), int(0)], vec![int(0), int(1)]],
        vec![vec![int(0), int(1)], vec![int(1), int(0)]],
        vec![vec![int(2), int(-1), int(0)], vec![int(-1), int(2), int(-1)], vec![int(0), int(-1), int(2)]],
        vec![vec![int(1), int(1), int(1)], vec![int(1), int(1), int(1)], vec![int(1), int(1), rat(99, 100)]],
    ];
    for m in cases {
        let psd = psd_from_charpoly(&char_poly(&m));
        let dir = negative_direction(&m);
        assert_eq!(psd, dir.is_none(), "{m:?}");
        if let Some(v) = dir {
            assert!(quadratic_form(&m, &v) < int(0));
        }
    }
}

#[test]
fn certify_uniform_m3_gives_simpson() {
    let ps = parse_dist_spec("uniform").unwrap().eps(3).unwrap();
    let r = certify_truncated(&ps, 13).unwrap();
    assert_eq!(r.verdict, Verdict::CertifiedTruncated);
    let w = r.witness().unwrap();
    assert_eq!(w.points(), &[int(0), rat(1, 2), int(1)]);
    assert_eq!(w.weights(), &[rat(1, 6), rat(2, 3), rat(1, 6)]);
}

#[test]
fn certify_rejects_with_square() {
    let ps = unit_prefix(&[int(1), rat(1, 2), rat(1, 5)]);
    let r = certify_truncated(&ps, 9).unwrap();
    assert_eq!(r.verdict, Verdict::Rejected);
    let (poly, pairing) = r.certificate().unwrap();
    // a positive multiple of (y - 1/2)^2 with y = 1 - x
    let expect = Polynomial::reflected(int(1), vec![rat(1, 4), int(-1), int(1)]);
    let ratio = poly.coeff(2) / expect.coeff(2);
    assert_eq!(*poly, expect.scale(&ratio));
    assert!(*pairing < int(0));
    assert!(r.to_text().starts_with("verdict REJECTED\n"));
}

#[test]
fn certify_point_mass_at_b() {
    let ps = parse_dist_spec("point 1").unwrap().eps(4).unwrap();
    let r = certify_truncated(&ps, 17).unwrap();
    assert_eq!(r.verdict, Verdict::CertifiedTruncated);
    let w = r.witness().unwrap();
    assert_eq!((w.points(), w.weights()), (&[int(1)][..], &[int(1)][..]));
}

#[test]
fn certify_off_grid_atom_via_cuts() {
    let ps = parse_dist_spec("atomic 1/3:1/2 5/7:1/2").unwrap().eps(6).unwrap();
    let r = certify_truncated(&ps, 25).unwrap();
    assert_eq!(r.verdict, Verdict::CertifiedTruncated, "{}", r.to_text());
    assert!(r.rounds > 1);
}

#[test]
fn certify_errors() {
    let ps = parse_dist_spec("uniform").unwrap().eps(5).unwrap();
    assert!(certify_truncated(&ps, 5).is_err());
    let bad = PrimitiveSeq::from_raw(Interval::unit(), vec![rat(1, 2), rat(1, 4)]).unwrap();
    assert_eq!(certify_truncated(&bad, 4).unwrap().verdict, Verdict::Rejected);
}

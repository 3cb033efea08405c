use super::*;
use crate::bitcore::{bool_product, random_matrix, BoolMatrix};
use crate::rng::rng_from_seed;
use rand::Rng;

#[test]
fn dense_examples() {
    let d = parse_dense("t", "1 0\n0 1").unwrap();
    assert_eq!(d.x, BoolMatrix::from_fn(2, 2, |i, j| i == j));
    assert!(d.is_complete());
    let d = parse_dense("t", "1 ?\n0 1\n").unwrap();
    assert_eq!(d.m, BoolMatrix::from_01(&[vec![1, 0], vec![1, 1]]).unwrap());
    assert_eq!(d.missing(), 1);
    assert!(!d.x.get(0, 1));
}

#[test]
fn dense_errors() {
    assert!(matches!(parse_dense("t", "1 0\n0"), Err(crate::BmfError::Parse { line: 2, .. })));
    assert!(matches!(parse_dense("t", "1 2"), Err(crate::BmfError::Parse { line: 1, .. })));
    assert!(load_dense("/nonexistent/file.txt").is_err());
}

fn random_dataset(seed: u64) -> Dataset {
    let mut rng = rng_from_seed(seed);
    let (r, c) = (rng.gen_range(1..40), rng.gen_range(1..90));
    let x = random_matrix(r, c, 0.4, &mut rng);
    let m = random_matrix(r, c, 0.85, &mut rng);
    Dataset::new("rand", x, m)
        .unwrap()
        .with_labels(
            Some((0..r).map(|i| format!("row {i}")).collect()),
            Some((0..c).map(|j| format!("c{j}")).collect()),
        )
        .unwrap()
}

#[test]
fn round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for s in 0..10 {
        let ds = random_dataset(s);
        let p = dir.path().join("rand.txt");
        save_dense(&ds, &p).unwrap();
        assert_eq!(load_dense(&p).unwrap(), ds);
        let p = dir.path().join("rand.tri");
        save_triplets(&ds, &p).unwrap();
        assert_eq!(Dataset::load(&p).unwrap(), ds);
    }
}

#[test]
fn triplet_examples() {
    let d = parse_triplets("t", "2 3\n1 1\n2 3\n# missing\n1 2\n").unwrap();
    assert_eq!(d.x, BoolMatrix::from_01(&[vec![1, 0, 0], vec![0, 0, 1]]).unwrap());
    assert_eq!(d.m, BoolMatrix::from_01(&[vec![1, 0, 1], vec![1, 1, 1]]).unwrap());
    assert!(parse_triplets("t", "2 2\n3 1\n").is_err());
    assert!(parse_triplets("t", "2 2\n0 1\n").is_err());
    assert!(parse_triplets("t", "2 2\n1 1\n1 1\n").is_err());
    assert!(parse_triplets("t", "2 2\n1 1\n# missing\n1 1\n").is_err());
    assert!(parse_triplets("t", "").is_err());
}

#[test]
fn binarize_examples() {
    let b = binarize(&[vec![0.49, 0.5, 0.51]], None, BinarizePolicy::Round).unwrap();
    assert_eq!(b.row(0).to_bools(), vec![false, true, true]);
    let b = binarize(&[vec![0.2], vec![0.2], vec![0.2]], None, BinarizePolicy::MeanPerColumn).unwrap();
    assert_eq!(b.count_ones(), 3);
    let b = binarize(&[vec![0.0, 3.0, 1.0]], None, BinarizePolicy::Nonzero).unwrap();
    assert_eq!(b.row(0).to_bools(), vec![false, true, true]);
    let b = binarize(&[vec![0.1], vec![0.4], vec![0.9], vec![0.3]], None, BinarizePolicy::MedianPerColumn).unwrap();
    assert_eq!(b.col(0).to_bools(), vec![false, true, true, false]);
    assert!(binarize(&[vec![f64::NAN]], None, BinarizePolicy::Round).is_err());
}

#[test]
fn binarize_thresholds_skip_masked_entries() {
    let vals = vec![vec![0.0], vec![1.0], vec![100.0]];
    let mask = BoolMatrix::from_01(&[vec![1], vec![1], vec![0]]).unwrap();
    let b = binarize(&vals, Some(&mask), BinarizePolicy::MeanPerColumn).unwrap();
    assert_eq!(b.col(0).to_bools(), vec![false, true, false]);
}

#[test]
fn binarize_is_idempotent_on_binary_input() {
    let mut rng = rng_from_seed(1);
    let x = random_matrix(7, 9, 0.5, &mut rng);
    let vals: Vec<Vec<f64>> = x.to_01().iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    assert_eq!(binarize(&vals, None, BinarizePolicy::Round).unwrap(), x);
    assert_eq!(binarize(&vals, None, BinarizePolicy::Nonzero).unwrap(), x);
}

#[test]
fn single_document_topic() {
    let mut x = BoolMatrix::zeros(5, 4);
    x.set(3, 2, true);
    let h = BoolMatrix::from_01(&[vec![0, 0, 1, 0]]).unwrap();
    let w = BoolMatrix::from_01(&[vec![0], vec![1], vec![0], vec![1], vec![0]]).unwrap();
    let wt = topic_importance(&x, &w, &h).unwrap();
    let labels: Vec<String> = (0..5).map(|i| format!("w{i}")).collect();
    let top = top_words(&wt, 3, &labels).unwrap();
    assert_eq!(top[0], vec![("w3".to_string(), 1)]);
}

#[test]
fn words_outside_topic_never_listed() {
    let x = BoolMatrix::ones(3, 3);
    let h = BoolMatrix::ones(1, 3);
    let w = BoolMatrix::from_01(&[vec![1], vec![0], vec![1]]).unwrap();
    let wt = topic_importance(&x, &w, &h).unwrap();
    assert_eq!(wt.get(1, 0), 0);
    let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    let top = top_words(&wt, 10, &labels).unwrap();
    assert_eq!(top[0], vec![("a".to_string(), 3), ("c".to_string(), 3)]);
    assert!(top_words(&wt, 2, &labels[..2]).is_err());
}

#[test]
fn topic_importance_matches_counting() {
    let mut rng = rng_from_seed(2);
    for _ in 0..20 {
        let x = random_matrix(10, 6, 0.5, &mut rng);
        let w = random_matrix(10, 3, 0.5, &mut rng);
        let h = random_matrix(3, 6, 0.5, &mut rng);
        let wt = topic_importance(&x, &w, &h).unwrap();
        for i in 0..10 {
            for k in 0..3 {
                let mut c = 0;
                for j in 0..6 {
                    c += (x.get(i, j) && h.get(k, j)) as u32;
                }
                assert_eq!(wt.get(i, k), if w.get(i, k) { c } else { 0 });
                assert!(wt.get(i, k) <= 6);
            }
        }
    }
}

#[test]
fn relative_error_examples() {
    let mut rng = rng_from_seed(3);
    let w = random_matrix(8, 2, 0.5, &mut rng);
    let h = random_matrix(2, 8, 0.5, &mut rng);
    let x = bool_product(&w, &h).unwrap();
    let m = BoolMatrix::ones(8, 8);
    if x.count_ones() > 0 {
        assert_eq!(relative_error(&x, &m, &w, &h).unwrap(), 0.0);
    }
    let x4 = BoolMatrix::from_fn(2, 2, |_, _| true);
    let m2 = BoolMatrix::ones(2, 2);
    assert_eq!(relative_error(&x4, &m2, &BoolMatrix::zeros(2, 1), &BoolMatrix::zeros(1, 2)).unwrap(), 1.0);
    let i3 = BoolMatrix::from_fn(3, 3, |i, j| i == j);
    let e = relative_error_of(1, &i3, &BoolMatrix::ones(3, 3)).unwrap();
    assert!((e - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
    assert!(relative_error_of(0, &BoolMatrix::zeros(2, 2), &m2).is_err());
}

#[test]
fn report_csv_layout() {
    let rows = vec![ReportRow::new("zoo", "ms-ao", 2, 7, 1.23456, 271, Some(271), Some(0.5)), ReportRow::new("x", "ao", 1, 0, 0.0, 5, None, None)];
    let mut buf = Vec::new();
    write_report(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "dataset,method,r,seed,time_s,error,error_diff_vs_reference,relative_error_pct");
    assert_eq!(lines[1], "zoo,ms-ao,2,7,1.235,271,0,50.00");
    assert_eq!(lines[2], "x,ao,1,0,0.000,5,,");
}

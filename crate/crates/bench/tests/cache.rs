use std::fs;
use std::thread;

use iwasawa_bench::cache::{compute_twists, curve_hash, Cache, CacheStatus};
use iwasawa_core::curve::{an_coeffs, named_curve, CurveModel};
use iwasawa_core::lvalues::LSeriesData;

#[test]
fn an_table_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path()).unwrap();
    let e = named_curve("11a1").unwrap();
    let (a, s) = cache.an_table(&e, 500).unwrap();
    assert_eq!(s, CacheStatus::Built);
    let (b, s) = cache.an_table(&e, 500).unwrap();
    assert_eq!(s, CacheStatus::Hit);
    assert_eq!(a, b);
    assert_eq!(a, an_coeffs(&e, 500));
    // a shorter request is served from the longer table
    let (c, s) = cache.an_table(&e, 100).unwrap();
    assert_eq!(s, CacheStatus::Hit);
    assert_eq!(c, an_coeffs(&e, 100));
    let (_, s) = cache.an_table(&e, 800).unwrap();
    assert!(matches!(s, CacheStatus::Rebuilt(_)));
}

#[test]
fn stale_hash_and_corruption_rebuild() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path()).unwrap();
    let e = named_curve("11a1").unwrap();
    cache.an_table(&e, 50).unwrap();
    // same label, different curve
    let impostor = CurveModel::from_integers("11a1", [0, 0, 1, -1, 0]).unwrap();
    assert_ne!(curve_hash(&impostor), curve_hash(&e));
    let (t, s) = cache.an_table(&impostor, 50).unwrap();
    assert_eq!(s, CacheStatus::Rebuilt("curve hash mismatch".into()));
    assert_eq!(t, an_coeffs(&impostor, 50));

    let path = cache.path("11a1", "an");
    fs::write(&path, "schema 1\nkind an\ngarbage here too\n").unwrap();
    let (t, s) = cache.an_table(&e, 50).unwrap();
    assert!(matches!(s, CacheStatus::Rebuilt(_)));
    assert_eq!(t, an_coeffs(&e, 50));
    fs::write(&path, fs::read_to_string(&path).unwrap().replace("schema 1", "schema 0")).unwrap();
    assert_eq!(cache.an_table(&e, 50).unwrap().1, CacheStatus::Rebuilt("schema mismatch".into()));
}

#[test]
fn twisted_values_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path()).unwrap();
    let e = named_curve("11a1").unwrap();
    let data = LSeriesData::new(&e, 25).unwrap();
    let (a, s) = cache.twisted_values(&e, &data, 5, 2).unwrap();
    assert_eq!(s, CacheStatus::Built);
    assert_eq!(a.len(), 20);
    let (b, s) = cache.twisted_values(&e, &data, 5, 2).unwrap();
    assert_eq!(s, CacheStatus::Hit);
    // values are written with full round-trip precision
    assert_eq!(a, b);
    assert_eq!(a, compute_twists(&data, 5, 2).unwrap());
}

#[test]
fn concurrent_builders_agree() {
    let dir = tempfile::tempdir().unwrap();
    let e = named_curve("37a1").unwrap();
    let tables: Vec<Vec<i64>> = thread::scope(|s| {
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let (d, e) = (dir.path(), &e);
                s.spawn(move || Cache::new(d).unwrap().an_table(e, 2000).unwrap().0)
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let expect = an_coeffs(&e, 2000);
    assert!(tables.iter().all(|t| *t == expect));
    let (t, s) = Cache::new(dir.path()).unwrap().an_table(&e, 2000).unwrap();
    assert_eq!(s, CacheStatus::Hit);
    assert_eq!(t, expect);
    // no temporary files are left behind
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

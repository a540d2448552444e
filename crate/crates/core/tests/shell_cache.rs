use std::time::Instant;

use latsphere::lab::cache::{read_shell, write_shell, CacheSource, ShellCache};
use latsphere::lattice::sphere_shell;
use latsphere::Error;

#[test]
fn round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for (d, k) in [(1, 9), (2, 25), (5, 1), (4, 12)] {
        let s = sphere_shell(d, k).unwrap();
        let p = dir.path().join(format!("{d}_{k}.txt"));
        write_shell(&s, &p).unwrap();
        assert_eq!(read_shell(&p).unwrap(), s);
    }
}

#[test]
fn tampered_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.txt");
    write_shell(&sphere_shell(5, 1).unwrap(), &p).unwrap();
    let text = std::fs::read_to_string(&p).unwrap();
    std::fs::write(&p, text.replacen("5 1 10", "5 1 12", 1)).unwrap();
    assert!(matches!(read_shell(&p), Err(Error::CountMismatch { header: 12, expected: 10 })));
    std::fs::write(&p, "5 1 10\n0 0 0 0 1\n0 0 0 0 1\n").unwrap();
    assert!(matches!(read_shell(&p), Err(Error::Parse { line: 3, .. })));
}

#[test]
fn cache_hit_is_much_faster_than_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ShellCache::new(dir.path());
    let t0 = Instant::now();
    let (first, src) = cache.get_traced(5, 50).unwrap();
    let cold = t0.elapsed();
    assert_eq!(src, CacheSource::Enumerated);
    let t1 = Instant::now();
    let (second, src) = cache.get_traced(5, 50).unwrap();
    let warm = t1.elapsed();
    assert_eq!(src, CacheSource::Memory);
    assert_eq!(first, second);
    assert!(warm * 10 <= cold, "cold {cold:?}, warm {warm:?}");
}

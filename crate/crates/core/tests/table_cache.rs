use std::fs;
use std::path::Path;

use horomean::{build_prime_table, load_table, save_table, Error, LoadError};

fn saved(dir: &Path) -> std::path::PathBuf {
    let table = build_prime_table(2, 10_000).unwrap();
    let path = dir.join("ptable-q2-x10000.txt");
    save_table(&table, &path).unwrap();
    path
}

#[test]
fn round_trip_preserves_table() {
    let dir = tempfile::tempdir().unwrap();
    let original = build_prime_table(2, 10_000).unwrap();
    let path = saved(dir.path());
    let loaded = load_table(&path).unwrap();
    assert_eq!(loaded.q(), 2);
    assert_eq!(loaded.limit(), 10_000);
    assert_eq!(loaded.records(), original.records());
    assert_eq!(loaded.spf(), original.spf());
    assert_eq!(loaded.checksum(), original.checksum());
    assert!(!path.with_extension("tmp").exists());
}

#[test]
fn file_layout() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(saved(dir.path())).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "horomean-ptable v1");
    assert_eq!(lines[1], "q=2 x=10000 count=1228");
    assert_eq!(lines[2], "3,2,1");
    assert_eq!(lines.len(), 1228 + 3);
    let crc = lines.last().unwrap().strip_prefix("crc32=").unwrap();
    assert_eq!(crc.len(), 8);
    assert!(crc
        .chars()
        .all(|c| c.is_ascii_hexdigit() && !c.is_ascii_uppercase()));
}

#[test]
fn truncated_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = saved(dir.path());
    let bytes = fs::read(&path).unwrap();
    for cut in [5, 40, bytes.len() / 2, bytes.len() - 3] {
        fs::write(&path, &bytes[..cut]).unwrap();
        assert!(load_table(&path).is_err(), "cut at {cut}");
    }
}

#[test]
fn wrong_version_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = saved(dir.path());
    let text = fs::read_to_string(&path).unwrap().replacen("v1", "v2", 1);
    fs::write(&path, text).unwrap();
    match load_table(&path) {
        Err(Error::Load(LoadError::Version { found, .. })) => {
            assert_eq!(found, "horomean-ptable v2")
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn corrupted_record_fails_checksum() {
    let dir = tempfile::tempdir().unwrap();
    let path = saved(dir.path());
    let text = fs::read_to_string(&path)
        .unwrap()
        .replacen("\n7,3,2\n", "\n7,3,3\n", 1);
    fs::write(&path, text).unwrap();
    assert!(matches!(
        load_table(&path),
        Err(Error::Load(LoadError::Checksum { .. }))
    ));
}

#[test]
fn consistent_checksum_with_wrong_data_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = saved(dir.path());
    let text = fs::read_to_string(&path).unwrap();
    let (head, _) = text.rsplit_once("crc32=").unwrap();
    let forged = head.replacen("\n7,3,2\n", "\n7,6,1\n", 1);
    let block: String = forged.split_inclusive('\n').skip(2).collect();
    let forged = format!("{forged}crc32={:08x}\n", crc32fast_hash(block.as_bytes()));
    fs::write(&path, forged).unwrap();
    assert!(matches!(
        load_table(&path),
        Err(Error::Load(LoadError::Inconsistent(_)))
    ));
}

// Bitwise CRC-32 (IEEE), independent of the library's implementation.
fn crc32fast_hash(bytes: &[u8]) -> u32 {
    let mut crc = !0u32;
    for &b in bytes {
        crc ^= u32::from(b);
        for _ in 0..8 {
            crc = if crc & 1 != 0 {
                (crc >> 1) ^ 0xEDB8_8320
            } else {
                crc >> 1
            };
        }
    }
    !crc
}

#[test]
fn missing_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(
        load_table(&dir.path().join("absent.txt")),
        Err(Error::Io(_))
    ));
}

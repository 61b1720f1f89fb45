//! The small groups used throughout the examples, with fixed element orders.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::FiniteGroup;

/// `C_n = <s>`, element `i` is `s^i`.
pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let names = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "s".to_string(),
            _ => format!("s^{i}"),
        })
        .collect();
    FiniteGroup::from_fn(format!("C{n}"), n, |a, b| (a + b) % n)
        .and_then(|g| g.with_names(names))
        .expect("cyclic group")
}

/// Dihedral group of order `2n`: element `a + n b` is `r^a f^b`, `f r f = r^-1`.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let name = if n == 3 { "S3".to_string() } else { format!("D{n}") };
    semidirect(&name, n, 2, |b, c| if b % 2 == 0 { c } else { (n - c) % n }, "r", "f")
}

/// `S_3`, as the dihedral group of order 6.
pub fn symmetric3() -> FiniteGroup {
    dihedral(3)
}

/// `C_3 ⋊ C_4` with `s r s^-1 = r^2`: element `a + 3 b` is `r^a s^b`.
pub fn dicyclic12() -> FiniteGroup {
    semidirect("S3^", 3, 4, |b, c| if b % 2 == 0 { c } else { (2 * c) % 3 }, "r", "s")
}

/// Quaternion group with index order
/// `1, ω, u, ωu, v, ωv, w, ωw`, where `ω = -1`, `u^2 = v^2 = w^2 = ω`,
/// `uv = w`, `vw = u`, `wu = v`.
pub fn quaternion8() -> FiniteGroup {
    // unit 0..4 = 1, u, v, w; (sign, unit) -> 2 * unit + sign
    fn unit_mul(x: usize, y: usize) -> (usize, usize) {
        match (x, y) {
            (0, y) => (0, y),
            (x, 0) => (0, x),
            (x, y) if x == y => (1, 0),
            (1, 2) => (0, 3),
            (2, 3) => (0, 1),
            (3, 1) => (0, 2),
            (2, 1) => (1, 3),
            (3, 2) => (1, 1),
            (1, 3) => (1, 2),
            _ => unreachable!(),
        }
    }
    let names = ["1", "ω", "u", "ωu", "v", "ωv", "w", "ωw"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_fn("Q8", 8, |a, b| {
        let (sign, unit) = unit_mul(a / 2, b / 2);
        2 * unit + ((a % 2) ^ (b % 2) ^ sign)
    })
    .and_then(|g| g.with_names(names))
    .expect("quaternion group")
}

/// Looks a catalog group up by name: `C<n>`, `D<n>` (order `2n`), `S3`,
/// `Q8`, `S3^` (alias `C3:C4`).
pub fn named_group(name: &str) -> Option<FiniteGroup> {
    let upper = name.trim();
    match upper {
        "Q8" | "q8" => return Some(quaternion8()),
        "S3" | "s3" => return Some(symmetric3()),
        "S3^" | "s3^" | "S3hat" | "s3hat" | "C3:C4" | "c3:c4" => return Some(dicyclic12()),
        _ => {}
    }
    let (head, tail) = upper.split_at(1.min(upper.len()));
    let n: usize = tail.parse().ok().filter(|&n| (1..=super::DEFAULT_ORDER_CAP).contains(&n))?;
    match head {
        "C" | "c" => Some(cyclic(n)),
        "D" | "d" if n >= 2 => Some(dihedral(n)),
        _ => None,
    }
}

/// `C_n ⋊ C_m`, element `a + n b` = `r^a t^b`, with `t^b r^c t^-b = r^{act(b, c)}`.
fn semidirect(
    name: &str,
    n: usize,
    m: usize,
    act: impl Fn(usize, usize) -> usize,
    r: &str,
    t: &str,
) -> FiniteGroup {
    let power = |x: &str, e: usize| -> String {
        match e {
            0 => String::new(),
            1 => x.to_string(),
            _ => format!("{x}^{e}"),
        }
    };
    let names: Vec<String> = (0..n * m)
        .map(|i| {
            let s = format!("{}{}", power(r, i % n), power(t, i / n));
            if s.is_empty() {
                "1".to_string()
            } else {
                s
            }
        })
        .collect();
    FiniteGroup::from_fn(name.to_string(), n * m, |x, y| {
        let (a, b) = (x % n, x / n);
        let (c, d) = (y % n, y / n);
        (a + act(b, c)) % n + n * ((b + d) % m)
    })
    .and_then(|g| g.with_names(names))
    .expect("semidirect product")
}

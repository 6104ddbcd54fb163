//! Integer helpers shared across the crate: gcd chains, modular inverses,
//! congruence solving, factoring of group orders, and a small deterministic RNG.

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Extended euclidean algorithm: returns (g, x, y) with a*x + b*y = g.
pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return (a, 1, 0);
    }
    let (g, x, y) = egcd(b, a % b);
    (g, y, x - (a / b) * y)
}

/// Multiplicative inverse of `a` modulo `n`, if it exists.
pub fn mod_inv(a: u128, n: u128) -> Option<u128> {
    if n == 1 {
        return Some(0);
    }
    let (g, x, _) = egcd((a % n) as i128, n as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(n as i128) as u128)
}

pub fn mod_mul(a: u128, b: u128, n: u128) -> u128 {
    // all moduli in this crate fit in 64 bits, so the product fits in u128
    debug_assert!(n <= u64::MAX as u128 || a.checked_mul(b).is_some());
    (a % n) * (b % n) % n
}

/// All solutions d (mod n) of a*d = b (mod n), ascending. Empty when unsolvable.
/// When a = 0 (mod n) and b = 0 (mod n), every residue is a solution; the
/// caller must handle that case, so we return `None` to signal "unconstrained".
pub fn solve_linear_congruence(a: u128, b: u128, n: u128) -> Option<Vec<u128>> {
    let a = a % n;
    let b = b % n;
    if a == 0 {
        return if b == 0 { None } else { Some(Vec::new()) };
    }
    let g = gcd_u128(a, n);
    if b % g != 0 {
        return Some(Vec::new());
    }
    let n1 = n / g;
    let inv = mod_inv(a / g, n1).expect("a/g coprime to n/g");
    let d0 = mod_mul(b / g % n1, inv, n1);
    Some((0..g).map(|k| d0 + k * n1).collect())
}

/// Merge x = a (mod m) with x = b (mod n) into x = c (mod lcm(m, n)).
/// Returns `None` when the two congruences are inconsistent.
pub fn merge_congruences(a: u128, m: u128, b: u128, n: u128) -> Option<(u128, u128)> {
    let (a, b) = (a % m, b % n);
    let g = gcd_u128(m, n);
    let (diff, sign) = if b >= a { (b - a, true) } else { (a - b, false) };
    if diff % g != 0 {
        return None;
    }
    let lcm = m / g * n;
    let inv = mod_inv(m / g, n / g).expect("coprime after dividing by gcd");
    let mut t = mod_mul(diff / g % (n / g), inv, n / g);
    if !sign && t != 0 {
        t = n / g - t;
    }
    Some(((a + m * t) % lcm, lcm))
}

/// Chinese remainder solve for pairwise coprime moduli; returns x mod prod(m_i).
pub fn crt(residues: &[(i128, u128)]) -> Result<(u128, u128), (u128, u128)> {
    let mut x: u128 = 0;
    let mut m: u128 = 1;
    for &(a, n) in residues {
        if gcd_u128(m, n) != 1 {
            return Err((m, n));
        }
        let a = a.rem_euclid(n as i128) as u128;
        let (xx, mm) = merge_congruences(x, m, a, n).expect("coprime moduli always merge");
        x = xx;
        m = mm;
    }
    Ok((x, m))
}

/// Prime factorization of `n` by trial division. For n < 2^40 (our group
/// orders) any cofactor surviving division up to 2^20 is itself prime.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e = 0;
    while n % 2 == 0 {
        n /= 2;
        e += 1;
    }
    push(2, e);
    let mut p = 3u64;
    while p * p <= n && p < (1 << 20) {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        push(p, e);
        p += 2;
    }
    if n > 1 {
        push(n, 1);
    }
    out
}

/// Floor of the integer square root.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = n;
    let mut y = (x + 1) / 2;
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    x
}

/// Is `q` a prime power p^k? Returns the prime on success.
pub fn prime_power_base(q: u128) -> Option<u128> {
    if q < 2 {
        return None;
    }
    let mut p = q;
    let mut d = 2u128;
    while d * d <= q {
        if p % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    let mut t = q;
    while t % p == 0 {
        t /= p;
    }
    (t == 1).then_some(p)
}

/// splitmix64: small deterministic RNG used for generator sampling and
/// randomized spot checks. Not cryptographic; reproducibility is the point.
#[derive(Clone, Debug)]
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

//! Elementary multiplicative number theory: sieves, Euler phi, Möbius,
//! von Mangoldt support, and the primitive-character count phi*.

/// Primes up to `n` inclusive (simple sieve).
pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut is_comp = vec![false; n + 1];
    let mut out = vec![];
    for p in 2..=n {
        if !is_comp[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                is_comp[m] = true;
                m += p;
            }
        }
    }
    out
}

/// Factorization as (prime, exponent) pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    let mut out = n;
    for (p, _) in factorize(n) {
        out = out / p * (p - 1);
    }
    out
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        return 0;
    }
    if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of primitive characters mod q: phi*(q) = Σ_{cd=q} φ(c)μ(d).
pub fn phi_star(q: u64) -> i64 {
    let mut s = 0i64;
    let mut d = 1;
    while d * d <= q {
        if q % d == 0 {
            s += mobius(d) * euler_phi(q / d) as i64;
            if d != q / d {
                s += mobius(q / d) * euler_phi(d) as i64;
            }
        }
        d += 1;
    }
    s
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All (m, Λ(m)) with m = p^k ≤ limit, ascending in m.
pub fn prime_powers_upto(limit: u64) -> Vec<(u64, f64)> {
    let mut out = vec![];
    for p in primes_upto(limit) {
        let lam = (p as f64).ln();
        let mut m = p;
        loop {
            out.push((m, lam));
            match m.checked_mul(p) {
                Some(next) if next <= limit => m = next,
                _ => break,
            }
        }
    }
    out.sort_by_key(|&(m, _)| m);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small() {
        assert_eq!(primes_upto(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_upto(1), Vec::<u64>::new());
    }

    #[test]
    fn phi_and_mu() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
    }

    #[test]
    fn phi_star_matches_known_counts() {
        // primitive character counts: q=1 -> 1 (trivial), q=2 -> 0,
        // q=3 -> 1, q=4 -> 1, q=5 -> 3, q=8 -> 2, q=9 -> 4, q=12 -> 1? no:
        // phi*(12) = phi*(4)phi*(3) = 1
        assert_eq!(phi_star(1), 1);
        assert_eq!(phi_star(2), 0);
        assert_eq!(phi_star(3), 1);
        assert_eq!(phi_star(4), 1);
        assert_eq!(phi_star(5), 3);
        assert_eq!(phi_star(8), 2);
        assert_eq!(phi_star(9), 4);
        assert_eq!(phi_star(12), 1);
        // q ≡ 2 (mod 4) admits no primitive character
        for q in [6, 10, 14, 18, 22] {
            assert_eq!(phi_star(q), 0);
        }
    }

    #[test]
    fn prime_powers_list() {
        let pp = prime_powers_upto(10);
        let ms: Vec<u64> = pp.iter().map(|&(m, _)| m).collect();
        assert_eq!(ms, vec![2, 3, 4, 5, 7, 8, 9]);
    }
}

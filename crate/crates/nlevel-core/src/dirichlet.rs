//! Dirichlet characters with exact root-of-unity values: unit-group
//! structure via CRT, primitive-character enumeration with deterministic
//! labels, parity, conductors and Gauss sums.

use num_complex::Complex64;

use crate::error::Error;
use crate::primes::{euler_phi, factorize, gcd, phi_star};

/// Generators of (ℤ/qℤ)* with their orders, via CRT over prime powers.
/// For 2^k with k ≥ 3 the group is ⟨−1⟩ × ⟨5⟩.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    pub q: u64,
    /// (generator mod q, order) pairs; empty for q ∈ {1, 2}
    pub generators: Vec<(u64, u64)>,
    /// discrete logs: dlog[n] = exponent vector of n, for (n,q)=1
    dlog: Vec<Option<Vec<u64>>>,
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % m;
        }
        a = a * a % m;
        e >>= 1;
    }
    r
}

/// Smallest primitive root mod p^k (p odd prime).
fn primitive_root(pk: u64, p: u64) -> u64 {
    let phi = euler_phi(pk);
    let prime_factors: Vec<u64> = factorize(phi).into_iter().map(|(f, _)| f).collect();
    let mut g = 2;
    loop {
        if gcd(g, pk) == 1
            && prime_factors
                .iter()
                .all(|&f| pow_mod(g, phi / f, pk) != 1)
        {
            return g;
        }
        g += 1;
        assert!(g < pk, "no primitive root found mod {pk} (p={p})");
    }
}

/// CRT lift: value ≡ r (mod pk), ≡ 1 (mod q/pk).
fn crt_lift(r: u64, pk: u64, q: u64) -> u64 {
    let rest = q / pk;
    if rest == 1 {
        return r % q;
    }
    // x = r + pk·t with x ≡ 1 mod rest
    let mut x = r % q;
    while x % rest != 1 {
        x = (x + pk) % q;
    }
    x
}

impl UnitGroup {
    pub fn new(q: u64) -> Result<Self, Error> {
        if q == 0 {
            return Err(Error::InvalidCharacter("modulus must be ≥ 1".into()));
        }
        let mut generators: Vec<(u64, u64)> = vec![];
        for (p, e) in factorize(q) {
            let pk = p.pow(e);
            if p == 2 {
                match e {
                    1 => {}
                    2 => generators.push((crt_lift(3, 4, q), 2)),
                    _ => {
                        generators.push((crt_lift(pk - 1, pk, q), 2));
                        generators.push((crt_lift(5, pk, q), pk / 4));
                    }
                }
            } else {
                let g = primitive_root(pk, p);
                generators.push((crt_lift(g, pk, q), euler_phi(pk)));
            }
        }
        // discrete-log table by enumerating the group
        let mut dlog: Vec<Option<Vec<u64>>> = vec![None; q as usize];
        let k = generators.len();
        let mut exps = vec![0u64; k];
        loop {
            let mut n: u64 = 1;
            for ((g, _), &e) in generators.iter().zip(exps.iter()) {
                n = n * pow_mod(*g, e, q) % q;
            }
            dlog[(n % q) as usize] = Some(exps.clone());
            // odometer over exponent ranges
            let mut i = 0;
            loop {
                if i == k {
                    break;
                }
                exps[i] += 1;
                if exps[i] < generators[i].1 {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        Ok(UnitGroup { q, generators, dlog })
    }

    pub fn dlog(&self, n: u64) -> Option<&Vec<u64>> {
        self.dlog[(n % self.q) as usize].as_ref()
    }
}

/// A Dirichlet character mod q given by exponents on the unit-group
/// generators. Values are exact roots of unity, stored as angle numerators
/// over a common denominator (the lcm of the generator orders).
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    pub q: u64,
    pub exponents: Vec<u64>,
    /// lcm of generator orders: every value is e^{2πi a/denom}
    pub denom: u64,
    /// angle numerator per residue, None when (n,q) > 1
    table: Vec<Option<u64>>,
    pub conductor: u64,
    /// parity: χ(−1) = (−1)^κ
    pub kappa: u8,
    /// label "q.k" with k the 1-based rank in lexicographic exponent order
    pub label: String,
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl DirichletCharacter {
    pub fn from_exponents(group: &UnitGroup, exponents: &[u64]) -> Result<Self, Error> {
        if exponents.len() != group.generators.len() {
            return Err(Error::InvalidCharacter(
                "exponent vector length mismatch".into(),
            ));
        }
        let q = group.q;
        let denom = group
            .generators
            .iter()
            .fold(1u64, |acc, &(_, ord)| lcm(acc, ord));
        let mut table: Vec<Option<u64>> = vec![None; q.max(1) as usize];
        for n in 0..q.max(1) {
            if let Some(d) = group.dlog(n) {
                // angle = Σ exp_i · d_i / ord_i (mod 1), over common denom
                let mut num = 0u64;
                for ((e, &(_, ord)), &di) in
                    exponents.iter().zip(&group.generators).zip(d.iter())
                {
                    num = (num + (e * di) % ord * (denom / ord)) % denom;
                }
                table[n as usize] = Some(num);
            }
        }
        let kappa = if q <= 2 {
            0
        } else {
            match table[(q - 1) as usize] {
                Some(0) => 0,
                Some(a) if 2 * a == denom => 1,
                other => {
                    return Err(Error::InvalidCharacter(format!(
                        "χ(−1) not ±1 (angle {other:?}/{denom})"
                    )))
                }
            }
        };
        let conductor = conductor_of(q, &table, denom);
        let mut chi = DirichletCharacter {
            q,
            exponents: exponents.to_vec(),
            denom,
            table,
            conductor,
            kappa,
            label: String::new(),
        };
        chi.label = format!("{q}.?");
        Ok(chi)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.q
    }

    /// Order of χ in the character group.
    pub fn order(&self) -> u64 {
        let mut ord = 1;
        for &a in self.table.iter().flatten() {
            if a != 0 {
                ord = lcm(ord, self.denom / gcd(a, self.denom));
            }
        }
        ord
    }

    /// Exact angle as (numerator, denominator): χ(n) = e^{2πi a/d}; None
    /// when (n,q) > 1.
    pub fn angle(&self, n: u64) -> Option<(u64, u64)> {
        self.table[(n % self.q) as usize].map(|a| (a, self.denom))
    }

    pub fn eval(&self, n: u64) -> Complex64 {
        match self.table[(n % self.q) as usize] {
            None => Complex64::new(0.0, 0.0),
            Some(a) => {
                let theta = 2.0 * std::f64::consts::PI * a as f64 / self.denom as f64;
                Complex64::new(theta.cos(), theta.sin())
            }
        }
    }

    /// Complex value table indexed by residue (0 where (n,q)>1).
    pub fn value_table(&self) -> Vec<Complex64> {
        (0..self.q).map(|n| self.eval(n)).collect()
    }

    pub fn is_real(&self) -> bool {
        self.table
            .iter()
            .flatten()
            .all(|&a| a == 0 || 2 * a == self.denom)
    }

    /// The conjugate character χ̄ (exponents negated).
    pub fn conjugate(&self, group: &UnitGroup) -> DirichletCharacter {
        let exps: Vec<u64> = self
            .exponents
            .iter()
            .zip(&group.generators)
            .map(|(&e, &(_, ord))| (ord - e % ord) % ord)
            .collect();
        let mut chi = DirichletCharacter::from_exponents(group, &exps).unwrap();
        // recover the canonical label by rank
        chi.label = label_for(group, &exps);
        chi
    }

    /// τ(χ) = Σ_a χ(a) e^{2πia/q}; requires primitivity (|τ| = √q).
    pub fn gauss_sum(&self) -> Result<Complex64, Error> {
        if !self.is_primitive() {
            return Err(Error::InvalidCharacter(format!(
                "gauss sum requires a primitive character; conductor {} < q {}",
                self.conductor, self.q
            )));
        }
        let mut s = Complex64::new(0.0, 0.0);
        for a in 1..self.q {
            let c = self.eval(a);
            if c.norm_sqr() > 0.0 {
                let th = 2.0 * std::f64::consts::PI * a as f64 / self.q as f64;
                s += c * Complex64::new(th.cos(), th.sin());
            }
        }
        Ok(s)
    }
}

/// Conductor: smallest d | q with χ(n) = 1 for all n ≡ 1 (mod d), (n,q)=1.
fn conductor_of(q: u64, table: &[Option<u64>], _denom: u64) -> u64 {
    if q == 1 {
        return 1;
    }
    let mut divisors: Vec<u64> = (1..=q).filter(|d| q % d == 0).collect();
    divisors.sort_unstable();
    'outer: for &d in &divisors {
        let mut n = 1;
        while n < q {
            if let Some(a) = table[n as usize] {
                if n % d == 1 % d && a != 0 {
                    continue 'outer;
                }
            }
            n += 1;
        }
        return d;
    }
    q
}

/// Canonical label for an exponent vector: "q.k", k = 1-based rank within
/// the primitive characters sorted lexicographically by exponents.
fn label_for(group: &UnitGroup, exps: &[u64]) -> String {
    let prims = primitive_exponent_vectors(group);
    match prims.iter().position(|e| e == exps) {
        Some(i) => format!("{}.{}", group.q, i + 1),
        None => format!("{}.?", group.q),
    }
}

fn primitive_exponent_vectors(group: &UnitGroup) -> Vec<Vec<u64>> {
    let orders: Vec<u64> = group.generators.iter().map(|&(_, o)| o).collect();
    let total: u64 = orders.iter().product();
    let mut out = vec![];
    for mut idx in 0..total {
        // decode with the last exponent varying fastest, so the natural
        // index order is already lexicographic
        let mut exps = vec![0u64; orders.len()];
        for i in (0..orders.len()).rev() {
            exps[i] = idx % orders[i];
            idx /= orders[i];
        }
        if group.q >= 2 {
            if let Ok(chi) = DirichletCharacter::from_exponents(group, &exps) {
                if chi.is_primitive() {
                    out.push(exps);
                }
            }
        }
    }
    out
}

/// All primitive characters mod q, labeled "q.1", "q.2", … in
/// lexicographic exponent order.
pub fn enumerate_primitive(q: u64) -> Result<Vec<DirichletCharacter>, Error> {
    if q < 2 {
        return Err(Error::InvalidCharacter(
            "primitive enumeration needs q ≥ 2".into(),
        ));
    }
    let group = UnitGroup::new(q)?;
    let prims = primitive_exponent_vectors(&group);
    let mut out = vec![];
    for (i, exps) in prims.iter().enumerate() {
        let mut chi = DirichletCharacter::from_exponents(&group, exps)?;
        chi.label = format!("{q}.{}", i + 1);
        out.push(chi);
    }
    debug_assert_eq!(out.len() as i64, phi_star(q));
    Ok(out)
}

/// Look up a character by its cache label "q.k".
pub fn character_by_label(label: &str) -> Result<DirichletCharacter, Error> {
    let (qs, ks) = label
        .split_once('.')
        .ok_or_else(|| Error::InvalidCharacter(format!("bad label '{label}'")))?;
    let q: u64 = qs
        .parse()
        .map_err(|_| Error::InvalidCharacter(format!("bad label '{label}'")))?;
    let k: usize = ks
        .parse()
        .map_err(|_| Error::InvalidCharacter(format!("bad label '{label}'")))?;
    let all = enumerate_primitive(q)?;
    all.into_iter()
        .nth(k.checked_sub(1).ok_or_else(|| {
            Error::InvalidCharacter("label index is 1-based".into())
        })?)
        .ok_or_else(|| Error::InvalidCharacter(format!("no character '{label}'")))
}

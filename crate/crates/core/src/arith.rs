//! Small integer helpers shared by every module.

/// Greatest common divisor, always nonnegative.
pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let (g, x, _) = xgcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

/// Exponent of `p` in `n`. `n` must be nonzero.
pub fn valuation(n: i128, p: i128) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Splits `n` as `p^v * u` with `p` not dividing `u`.
pub fn val_unit(n: i128, p: i128) -> (u32, i128) {
    assert!(n != 0, "valuation of zero");
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: i128) -> i128 {
    assert!(n >= 0);
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: i128) -> bool {
    n >= 0 && {
        let r = isqrt(n);
        r * r == n
    }
}

pub fn pow(base: i128, exp: u32) -> i128 {
    base.checked_pow(exp).expect("integer overflow in pow")
}

pub fn pow_mod(mut base: i128, mut exp: u128, m: i128) -> i128 {
    let mut acc = 1 % m;
    base = base.rem_euclid(m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: i128) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization of |n| as sorted (prime, exponent) pairs.
pub fn factor(n: i128) -> Vec<(i128, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Legendre symbol (a/p) for an odd prime p, returning -1, 0 or 1.
pub fn legendre(a: i128, p: i128) -> i32 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, ((p - 1) / 2) as u128, p) == 1 {
        1
    } else {
        -1
    }
}

/// Smallest quadratic nonresidue modulo the odd prime p.
pub fn min_nonsquare(p: i128) -> i128 {
    (2..p)
        .find(|&a| legendre(a, p) == -1)
        .expect("odd prime has a nonresidue")
}

/// Square root of `a` modulo odd prime `p` (brute force; p is small here).
pub fn sqrt_mod_prime(a: i128, p: i128) -> Option<i128> {
    let a = a.rem_euclid(p);
    (0..p).find(|&x| x * x % p == a)
}

/// Odd primes not dividing `n`, in increasing order.
pub fn good_odd_primes(n: i128) -> impl Iterator<Item = i128> {
    (3..).filter(move |&q| is_prime(q) && n % q != 0)
}

//! Text grammars for complex numbers, vectors, matrices, affine symbols and multipliers.
//!
//! * complex: `2`, `-0.5i`, `i`, `1+2i`, `1e-3-4e-2i`
//! * vector: `a,b,c` (or `0` for the zero vector)
//! * matrix: rows separated by `;`, entries by `,`: `0,0.5;-0.5,0`
//! * affine map: `MATRIX|SHIFT`, or `NAME;SHIFT` with `NAME` one of `id`,
//!   `zero`, `projJJ` (the matrix unit `e_JJ`)
//! * multiplier: `1`, `zero`, `const:c`, `kernel:ALPHA@q1,q2`,
//!   `poly:c@e1,e2;c@e1,e2`

use std::fmt;

use fockpsi_core::{AffineMap, CMatrix, CVector, Complex64, MultiIndex, Polynomial, WeightSymbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

fn real(s: &str, whole: &str) -> Result<f64, ParseError> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => s.parse::<f64>().map_err(|_| ParseError(format!("bad number `{whole}`"))),
    }
}

pub fn complex(text: &str) -> Result<Complex64, ParseError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return err("empty number");
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        let re = s.parse::<f64>().map_err(|_| ParseError(format!("bad number `{text}`")))?;
        return Ok(Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| ParseError(format!("bad number `{text}`")))?;
            Ok(Complex64::new(re, real(&body[k..], text)?))
        }
        None => Ok(Complex64::new(0.0, real(body, text)?)),
    }
}

pub fn vector(text: &str, n: Option<usize>) -> Result<CVector, ParseError> {
    let t = text.trim();
    if t == "0" {
        let Some(n) = n else {
            return err("the zero vector `0` needs --n");
        };
        return Ok(CVector::zeros(n));
    }
    let v: Vec<Complex64> = t.split(',').map(complex).collect::<Result<_, _>>()?;
    if let Some(n) = n {
        if v.len() != n {
            return err(format!("vector `{t}` has length {}, expected {n}", v.len()));
        }
    }
    Ok(CVector::from_vec(v))
}

pub fn matrix(text: &str) -> Result<CMatrix, ParseError> {
    let rows: Vec<Vec<Complex64>> = text
        .trim()
        .split(';')
        .map(|r| r.split(',').map(complex).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return err(format!("matrix `{text}` is not square"));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn named_matrix(name: &str, n: Option<usize>) -> Option<Result<CMatrix, ParseError>> {
    let needs_n = |n: Option<usize>| n.ok_or_else(|| ParseError(format!("named matrix `{name}` needs --n")));
    match name {
        "id" | "identity" => Some(needs_n(n).map(|n| CMatrix::identity(n, n))),
        "zero" => Some(needs_n(n).map(|n| CMatrix::zeros(n, n))),
        _ => {
            let digits = name.strip_prefix("proj")?;
            let bytes = digits.as_bytes();
            if bytes.len() != 2 || bytes[0] != bytes[1] || !bytes[0].is_ascii_digit() {
                return None;
            }
            let j = (bytes[0] - b'0') as usize;
            Some(needs_n(n).and_then(|n| {
                if j == 0 || j > n {
                    return err(format!("`{name}` is outside dimension {n}"));
                }
                let mut m = CMatrix::zeros(n, n);
                m[(j - 1, j - 1)] = Complex64::new(1.0, 0.0);
                Ok(m)
            }))
        }
    }
}

/// `Γ(z) = C z + shift`; the shift is stored as written.
pub fn affine(text: &str, n: Option<usize>) -> Result<AffineMap, ParseError> {
    let t = text.trim();
    let head = t.split([';', '|']).next().unwrap_or("").trim();
    let (c, shift) = if let Some(named) = named_matrix(head, n) {
        let c = named?;
        let rest = t[head.len()..].trim_start_matches([';', '|']);
        (c, rest)
    } else {
        match t.split_once('|') {
            Some((m, s)) => (matrix(m)?, s),
            None => (matrix(t)?, ""),
        }
    };
    let dim = c.nrows();
    if let Some(n) = n {
        if dim != n {
            return err(format!("map `{t}` has dimension {dim}, expected {n}"));
        }
    }
    let d = if shift.trim().is_empty() { CVector::zeros(dim) } else { vector(shift, Some(dim))? };
    AffineMap::new(c, d).map_err(|e| ParseError(e.to_string()))
}

pub fn weight_symbol(text: &str, n: usize) -> Result<WeightSymbol, ParseError> {
    let t = text.trim();
    if t == "zero" {
        return Ok(WeightSymbol::Zero);
    }
    if let Some(rest) = t.strip_prefix("kernel:") {
        let Some((alpha, q)) = rest.split_once('@') else {
            return err("kernel multiplier is `kernel:ALPHA@q1,..,qn`");
        };
        return Ok(WeightSymbol::KernelMultiple { alpha: complex(alpha)?, center: vector(q, Some(n))? });
    }
    if let Some(rest) = t.strip_prefix("poly:") {
        let mut terms = Vec::new();
        for term in rest.split(';').filter(|s| !s.trim().is_empty()) {
            let Some((coef, exps)) = term.split_once('@') else {
                return err("polynomial terms are `COEF@e1,..,en`");
            };
            let e: Vec<u32> = exps
                .split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| ParseError(format!("bad exponent in `{term}`"))))
                .collect::<Result<_, _>>()?;
            if e.len() != n {
                return err(format!("term `{term}` has {} exponents, expected {n}", e.len()));
            }
            terms.push((MultiIndex::new(e), complex(coef)?));
        }
        return Polynomial::from_terms(n, terms).map(WeightSymbol::Polynomial).map_err(|e| ParseError(e.to_string()));
    }
    let value = complex(t.strip_prefix("const:").unwrap_or(t))?;
    Ok(if value == Complex64::new(0.0, 0.0) { WeightSymbol::Zero } else { WeightSymbol::Constant(value) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_literals() {
        assert_eq!(complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(complex("-0.5i").unwrap(), c(0.0, -0.5));
        assert_eq!(complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(complex("1 - i").unwrap(), c(1.0, -1.0));
        assert_eq!(complex("1e-3-4e-2i").unwrap(), c(1e-3, -4e-2));
        assert_eq!(complex("-1e+2+1e-1j").unwrap(), c(-100.0, 0.1));
        assert!(complex("abc").is_err());
        assert!(complex("").is_err());
    }

    #[test]
    fn matrices_and_maps() {
        let g = affine("0,0.5;-0.5,0|1,0", None).unwrap();
        assert_eq!(g.linear_part()[(0, 1)], c(0.5, 0.0));
        assert_eq!(g.shift()[0], c(1.0, 0.0));
        let g = affine("proj11;0", Some(2)).unwrap();
        assert_eq!(g.linear_part()[(0, 0)], c(1.0, 0.0));
        assert_eq!(g.linear_part()[(1, 1)], c(0.0, 0.0));
        let g = affine("id|1,i", Some(2)).unwrap();
        assert_eq!(g.shift()[1], c(0.0, 1.0));
        assert_eq!(affine("zero", Some(3)).unwrap().n(), 3);
        assert!(affine("proj33", Some(2)).is_err());
        assert!(affine("id", None).is_err());
        assert!(affine("1,2;3", None).is_err());
        assert!(affine("1,0;0,1", Some(3)).is_err());
    }

    #[test]
    fn multipliers() {
        assert_eq!(weight_symbol("1", 2).unwrap(), WeightSymbol::one());
        assert_eq!(weight_symbol("0", 2).unwrap(), WeightSymbol::Zero);
        assert_eq!(weight_symbol("const:2i", 1).unwrap(), WeightSymbol::Constant(c(0.0, 2.0)));
        let WeightSymbol::KernelMultiple { alpha, center } = weight_symbol("kernel:2@1,0", 2).unwrap() else {
            panic!()
        };
        assert_eq!((alpha, center[0]), (c(2.0, 0.0), c(1.0, 0.0)));
        let WeightSymbol::Polynomial(p) = weight_symbol("poly:1@0,0;0.5i@1,1", 2).unwrap() else { panic!() };
        assert_eq!(p.coefficient(&MultiIndex::from([1, 1])), c(0.0, 0.5));
        assert!(weight_symbol("poly:1@0", 2).is_err());
        assert!(weight_symbol("kernel:1", 1).is_err());
    }
}

//! Parsers for the two polynomial input syntaxes: explicit coefficient
//! lists ("coefs:1,0,0,2") and a restricted ASCII grammar over x and y
//! with integer coefficients and caret powers ("x^3+2y^3", "x^2 - 1").

use kfree_core::{BinaryForm, UnivariatePoly};
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedTerm {
    pub coef: BigInt,
    pub x_exp: u64,
    pub y_exp: u64,
}

#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

/// Tokenize a polynomial into signed terms.
pub fn parse_terms(input: &str) -> Result<Vec<ParsedTerm>, ParseError> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return err("empty polynomial");
    }
    let bytes = s.as_bytes();
    let mut i = 0usize;
    let mut terms = Vec::new();
    let mut sign: i64 = 1;
    // optional leading sign
    if bytes[0] == b'+' {
        i = 1;
    } else if bytes[0] == b'-' {
        sign = -1;
        i = 1;
    }
    loop {
        if i >= bytes.len() {
            return err("dangling sign at end of input");
        }
        // coefficient digits
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let mut coef = if i > start {
            s[start..i].parse::<BigInt>().map_err(|e| ParseError(e.to_string()))?
        } else {
            BigInt::from(1)
        };
        if sign < 0 {
            coef = -coef;
        }
        let mut x_exp = 0u64;
        let mut y_exp = 0u64;
        let mut saw_var = i > start; // a bare integer is a valid term
        let parse_var = |i: &mut usize, var: u8| -> Result<Option<u64>, ParseError> {
            if *i < bytes.len() && bytes[*i] == var {
                *i += 1;
                if *i < bytes.len() && bytes[*i] == b'^' {
                    *i += 1;
                    let st = *i;
                    while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                        *i += 1;
                    }
                    if *i == st {
                        return err("caret must be followed by digits");
                    }
                    let e: u64 = s[st..*i]
                        .parse()
                        .map_err(|_| ParseError("exponent too large".into()))?;
                    Ok(Some(e))
                } else {
                    Ok(Some(1))
                }
            } else {
                Ok(None)
            }
        };
        if let Some(e) = parse_var(&mut i, b'x')? {
            x_exp = e;
            saw_var = true;
        }
        if let Some(e) = parse_var(&mut i, b'y')? {
            y_exp = e;
            saw_var = true;
        }
        if !saw_var {
            return err(format!("unexpected character at position {i}"));
        }
        terms.push(ParsedTerm { coef, x_exp, y_exp });
        if i == bytes.len() {
            break;
        }
        sign = match bytes[i] {
            b'+' => 1,
            b'-' => -1,
            c => return err(format!("expected + or - but found '{}'", c as char)),
        };
        i += 1;
    }
    Ok(terms)
}

fn parse_coef_list(list: &str) -> Result<Vec<BigInt>, ParseError> {
    list.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|e| ParseError(e.to_string())))
        .collect()
}

/// A homogeneous binary form from either syntax.
pub fn parse_binary_form(input: &str) -> Result<BinaryForm, ParseError> {
    if let Some(list) = input.strip_prefix("coefs:") {
        let coeffs = parse_coef_list(list)?;
        return BinaryForm::new(coeffs).map_err(|e| ParseError(e.to_string()));
    }
    let terms = parse_terms(input)?;
    let degree = terms
        .iter()
        .map(|t| t.x_exp + t.y_exp)
        .max()
        .ok_or_else(|| ParseError("empty polynomial".into()))?;
    if degree == 0 {
        return err("a binary form needs degree at least 1");
    }
    for t in &terms {
        if t.x_exp + t.y_exp != degree {
            return err(format!(
                "form is not homogeneous: a term has total degree {} but the form has degree {degree}",
                t.x_exp + t.y_exp
            ));
        }
    }
    let mut coeffs = vec![BigInt::zero(); degree as usize + 1];
    for t in terms {
        // slot for x^i y^(D-i) is index D - i
        coeffs[(degree - t.x_exp) as usize] += t.coef;
    }
    BinaryForm::new(coeffs).map_err(|e| ParseError(e.to_string()))
}

/// A univariate integer polynomial in x from either syntax
/// ("coefs:" lists are descending in x).
pub fn parse_univariate(input: &str) -> Result<UnivariatePoly, ParseError> {
    if let Some(list) = input.strip_prefix("coefs:") {
        let mut coeffs = parse_coef_list(list)?;
        coeffs.reverse();
        return Ok(UnivariatePoly::new(coeffs));
    }
    let terms = parse_terms(input)?;
    let mut coeffs: Vec<BigInt> = Vec::new();
    for t in terms {
        if t.y_exp != 0 {
            return err("univariate polynomials may only use x");
        }
        let idx = t.x_exp as usize;
        if coeffs.len() <= idx {
            coeffs.resize(idx + 1, BigInt::zero());
        }
        coeffs[idx] += t.coef;
    }
    Ok(UnivariatePoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn binary_forms() {
        let f = parse_binary_form("x^3+2y^3").unwrap();
        assert_eq!(f.degree(), 3);
        assert_eq!(f.coefficients()[0], BigInt::from(1));
        assert_eq!(f.coefficients()[3], BigInt::from(2));

        let g = parse_binary_form("coefs:1,0,0,2").unwrap();
        assert_eq!(f, g);

        let h = parse_binary_form("-x^2y + 3xy^2").unwrap();
        assert_eq!(h.degree(), 3);
        assert_eq!(h.coefficients()[1], BigInt::from(-1));
        assert_eq!(h.coefficients()[2], BigInt::from(3));

        assert!(parse_binary_form("x^2+y").is_err()); // not homogeneous
        assert!(parse_binary_form("x^2 + z^2").is_err());
        assert!(parse_binary_form("5").is_err()); // degree zero
        assert!(parse_binary_form("").is_err());
        assert!(parse_binary_form("x^").is_err());
        assert!(parse_binary_form("2x^2-").is_err());
    }

    #[test]
    fn univariate_polynomials() {
        let g = parse_univariate("x^2-1").unwrap();
        assert_eq!(g.coefficients(), &[BigInt::from(-1), BigInt::from(0), BigInt::from(1)]);
        let h = parse_univariate("coefs:1,0,-1").unwrap();
        assert_eq!(g, h);
        assert!(parse_univariate("x+y").is_err());
        // Repeated monomials accumulate.
        let s = parse_univariate("x+x").unwrap();
        assert_eq!(s.coefficients(), &[BigInt::from(0), BigInt::from(2)]);
    }
}

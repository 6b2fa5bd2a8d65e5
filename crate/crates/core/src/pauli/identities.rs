//! Checkable consequences of the bracket algebra on edging sequences.
//!
//! These are used as property-test oracles and by the verification suites.

use super::{bracket_normalized, PauliString};
use crate::dense::{commutator, max_abs_diff, pauli_matrix};
use crate::error::{Error, Result};

/// Largest register accepted by the dense bilinear check.
pub const BILINEAR_CAP: usize = 8;

fn support_mask(p: &PauliString) -> Vec<bool> {
    p.cells().map(|c| c != super::Cell::I).collect()
}

/// Checks `[A⊗D, B⊗E] = [A,B]⊗DE + BA⊗[D,E]` by dense evaluation.
///
/// `a`, `b` must live on one block of sites and `d`, `e` on a disjoint one.
/// All four are given on the full register.
pub fn check_bilinear_decomposition(
    a: &PauliString,
    d: &PauliString,
    b: &PauliString,
    e: &PauliString,
) -> Result<bool> {
    let n = a.n_qubits();
    for s in [d, b, e] {
        if s.n_qubits() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: s.n_qubits(),
            });
        }
    }
    if n > BILINEAR_CAP {
        return Err(Error::CapExceeded {
            what: "bilinear check",
            cap: BILINEAR_CAP,
            n_qubits: n,
        });
    }
    let left: Vec<bool> = support_mask(a)
        .iter()
        .zip(support_mask(b))
        .map(|(x, y)| *x || y)
        .collect();
    let right: Vec<bool> = support_mask(d)
        .iter()
        .zip(support_mask(e))
        .map(|(x, y)| *x || y)
        .collect();
    if left.iter().zip(&right).any(|(x, y)| *x && *y) {
        return Err(Error::InvalidInput("operator blocks overlap".into()));
    }
    let (ma, mb, md, me) = (
        pauli_matrix(a),
        pauli_matrix(b),
        pauli_matrix(d),
        pauli_matrix(e),
    );
    let lhs = commutator(&(&ma * &md), &(&mb * &me));
    let rhs = commutator(&ma, &mb) * (&md * &me) + (&mb * &ma) * commutator(&md, &me);
    Ok(max_abs_diff(&lhs, &rhs) <= 1e-12)
}

/// End of the path that starts at `start` and applies `⌊·, ν⌉` for each
/// edging operator in turn; `None` if some step commutes.
pub fn path_end(start: &PauliString, sequence: &[PauliString]) -> Result<Option<PauliString>> {
    let mut current = start.clone();
    for nu in sequence {
        match bracket_normalized(&current, nu)? {
            Some(next) => current = next,
            None => return Ok(None),
        }
    }
    Ok(Some(current))
}

/// `true` if every reordering in `orders` that yields a path reaches the
/// same end string as `sequence` itself (when that path exists).
pub fn check_permutation_invariance(
    start: &PauliString,
    sequence: &[PauliString],
    orders: &[Vec<usize>],
) -> Result<bool> {
    let Some(reference) = path_end(start, sequence)? else {
        return Ok(true);
    };
    for order in orders {
        let permuted: Vec<PauliString> = order.iter().map(|&i| sequence[i].clone()).collect();
        if let Some(end) = path_end(start, &permuted)? {
            if end != reference {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Removes every edging operator that occurs an even number of times and
/// checks that the shortened path, if it exists, ends where the original did.
pub fn check_even_pair_removal(start: &PauliString, sequence: &[PauliString]) -> Result<bool> {
    let Some(reference) = path_end(start, sequence)? else {
        return Ok(true);
    };
    let reduced: Vec<PauliString> = sequence
        .iter()
        .filter(|nu| sequence.iter().filter(|m| m == nu).count() % 2 == 1)
        .cloned()
        .collect();
    Ok(match path_end(start, &reduced)? {
        Some(end) => end == reference,
        None => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_string;

    fn p(t: &str, n: usize) -> PauliString {
        parse_string(t, n).unwrap()
    }

    #[test]
    fn bilinear_examples() {
        assert!(
            check_bilinear_decomposition(&p("Y1", 2), &p("X2", 2), &p("Y1", 2), &p("Y2", 2))
                .unwrap()
        );
        let id = PauliString::identity(2);
        assert!(check_bilinear_decomposition(&id, &id, &id, &id).unwrap());
        assert!(check_bilinear_decomposition(&p("X1", 2), &p("X1", 2), &id, &id).is_err());
    }

    #[test]
    fn path_end_follows_brackets() {
        let start = p("Z1", 3);
        let seq = [p("X1 X2", 3), p("Y1 Y2", 3)];
        assert_eq!(path_end(&start, &seq).unwrap(), Some(p("Z2", 3)));
        assert_eq!(path_end(&start, &[p("Z1", 3)]).unwrap(), None);
    }

    #[test]
    fn even_pair_removal_on_known_path() {
        // Z1 -> Y1X2 -> Z2 -> X1Y2 -> Z1; both operators occur twice.
        let start = p("Z1", 3);
        let seq = [p("X1 X2", 3), p("Y1 Y2", 3), p("X1 X2", 3), p("Y1 Y2", 3)];
        assert_eq!(path_end(&start, &seq).unwrap(), Some(start.clone()));
        assert!(check_even_pair_removal(&start, &seq).unwrap());
    }
}

use thiserror::Error;

/// Errors raised by field, curve, torsion and solver operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus is not prime")]
    NotPrime,
    #[error("modulus must be congruent to 3 mod 4")]
    BadModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a square")]
    NotASquare,
    #[error("curve discriminant is zero")]
    SingularCurve,
    #[error("point is not on the curve")]
    OffCurve,
    #[error("point is not in the l^e-torsion subgroup")]
    NotInTorsion,
    #[error("element is outside the subgroup generated by the base")]
    NotInSubgroup,
    #[error("randomized search exceeded {limit} attempts while {what}")]
    RetryLimitExceeded { what: &'static str, limit: usize },
    #[error("point has l-power order l^{found}, expected l^{expected}")]
    OrderError { expected: u32, found: u32 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("no solution exists (u = {u}, r = {r})")]
    NoSolution { u: u32, r: u32 },
    #[error("element is not an l^r-th power")]
    NotAPower,
    #[error("internal verification failed: {0}")]
    VerificationFailed(&'static str),
    #[error("degenerate simultaneous system")]
    DegenerateSystem,
    #[error("equations are consistent but admit no generating solution")]
    NoGeneratingSolution,
    #[error("enumeration size exceeds the guard bound {bound}")]
    TooLarge { bound: u64 },
    #[error("no parameters found within the search bound")]
    NotFound,
    #[error("bad parameters: {0}")]
    BadParams(&'static str),
    #[error("mismatched coordinate count for this group")]
    CoordMismatch,
}

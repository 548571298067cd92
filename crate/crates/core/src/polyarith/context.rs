use crate::polyarith::PolyError;

/// Largest prime accepted by [`PrimeContext`].
pub const MAX_PRIME: u32 = 97;

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The fixed prime together with the names of the polynomial variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeContext {
    p: u32,
    names: Vec<String>,
}

impl PrimeContext {
    pub fn new<S: AsRef<str>>(p: u32, names: &[S]) -> Result<Self, PolyError> {
        if !(2..=MAX_PRIME).contains(&p) || !is_prime(p as u64) {
            return Err(PolyError::InvalidPrime(p));
        }
        if names.is_empty() {
            return Err(PolyError::InvalidVariables(
                "at least one variable is required".into(),
            ));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(PolyError::InvalidVariables(format!(
                    "`{name}` is not an identifier"
                )));
            }
            if names[..i].contains(name) {
                return Err(PolyError::InvalidVariables(format!(
                    "`{name}` declared twice"
                )));
            }
        }
        Ok(Self { p, names })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

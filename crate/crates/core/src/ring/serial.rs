use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// JSON integer that falls back to a decimal string outside the i64 range.
#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
pub(crate) enum BigNum {
    Small(i64),
    Text(String),
}

impl From<&BigInt> for BigNum {
    fn from(x: &BigInt) -> Self {
        match x.to_i64() {
            Some(v) => BigNum::Small(v),
            None => BigNum::Text(x.to_string()),
        }
    }
}

impl BigNum {
    pub(crate) fn into_big(self) -> Result<BigInt, String> {
        match self {
            BigNum::Small(v) => Ok(BigInt::from(v)),
            BigNum::Text(s) => s.trim().parse::<BigInt>().map_err(|e| format!("bad integer {s:?}: {e}")),
        }
    }
}

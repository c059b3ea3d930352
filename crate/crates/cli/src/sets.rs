//! Text forms of sift sets: `lo..hi` (inclusive), `b:N` for `(N/2, N]`,
//! `list:n1,n2,...`.

use fracpoly::sieve::SiftSet;
use fracpoly::{Error, Result};

/// Largest set the CLI will materialise.
pub const MAX_SET_LEN: u64 = 20_000_000;

fn parse_num(t: &str) -> Result<u64> {
    crate::config::parse_uint(t).ok_or_else(|| Error::Parse {
        what: "set",
        detail: format!("bad integer {t:?}"),
    })
}

pub fn parse_set(text: &str) -> Result<SiftSet> {
    let t = text.trim();
    let too_big = |len: u64| {
        if len > MAX_SET_LEN {
            Err(Error::Size {
                size: len as u128,
                cap: MAX_SET_LEN as u128,
            })
        } else {
            Ok(())
        }
    };
    if let Some(n) = t.strip_prefix("b:") {
        let n = parse_num(n)?;
        too_big(n - n / 2)?;
        return SiftSet::b_set(n);
    }
    if let Some(list) = t.strip_prefix("list:") {
        let v = list.split(',').map(parse_num).collect::<Result<Vec<_>>>()?;
        return SiftSet::new(v);
    }
    if let Some((lo, hi)) = t.split_once("..") {
        let (lo, hi) = (parse_num(lo)?, parse_num(hi)?);
        if lo == 0 || hi < lo {
            return Err(Error::domain("need 1 <= lo <= hi"));
        }
        too_big(hi - lo + 1)?;
        return SiftSet::interval(lo - 1, hi);
    }
    Err(Error::Parse {
        what: "set",
        detail: format!("{t:?}: expected lo..hi, b:N or list:..."),
    })
}

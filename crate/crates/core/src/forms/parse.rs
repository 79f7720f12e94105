//! Text encodings of forms: a B-diagonal shorthand `2,11,6` and full rows of
//! `G = 2B` separated by semicolons, `2,1;1,2`.

use super::{diagonal_form, make_form, FormError, QuadForm};

fn parse_row(text: &str) -> Result<Vec<i64>, FormError> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<i64>()
                .map_err(|e| FormError::Parse(format!("invalid integer {t:?}: {e}")))
        })
        .collect()
}

pub fn parse_diagonal(text: &str) -> Result<QuadForm, FormError> {
    if text.trim().is_empty() {
        return Err(FormError::Parse("empty diagonal".into()));
    }
    diagonal_form(&parse_row(text)?)
}

pub fn parse_twice_gram(text: &str) -> Result<QuadForm, FormError> {
    if text.trim().is_empty() {
        return Err(FormError::Parse("empty matrix".into()));
    }
    let rows = text.split(';').map(parse_row).collect::<Result<Vec<_>, _>>()?;
    make_form(rows)
}

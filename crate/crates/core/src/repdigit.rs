//! Base-10 repdigits `d (10^l - 1) / 9`.

use rug::ops::Pow;
use rug::Integer;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Repdigit {
    digit: u8,
    length: u32,
    value: Integer,
}

impl Repdigit {
    pub fn digit(&self) -> u8 {
        self.digit
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn value(&self) -> &Integer {
        &self.value
    }

    pub fn into_value(self) -> Integer {
        self.value
    }
}

pub fn make_repdigit(digit: u32, length: u32) -> Result<Repdigit> {
    if !(1..=9).contains(&digit) {
        return Err(Error::domain(format!("repdigit digit {digit} outside 1..=9")));
    }
    if length == 0 {
        return Err(Error::domain("repdigit length must be at least 1"));
    }
    let value = (Integer::from(10u32).pow(length) - 1u32) / 9u32 * digit;
    Ok(Repdigit {
        digit: digit as u8,
        length,
        value,
    })
}

/// `(d, l)` when `n` is a repdigit.
pub fn classify_repdigit(n: &Integer) -> Option<(u8, u32)> {
    if *n < 1 {
        return None;
    }
    let s = n.to_string_radix(10);
    let bytes = s.as_bytes();
    let first = bytes[0];
    if bytes.iter().all(|&b| b == first) {
        Some((first - b'0', bytes.len() as u32))
    } else {
        None
    }
}

//! JSON serialization with floats written at 17 significant digits, which
//! is enough for every 64-bit float to parse back to the identical bits.

use std::io;

use serde::Serialize;

struct Float17Formatter;

impl serde_json::ser::Formatter for Float17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        // One mantissa digit before the point plus sixteen after.
        write!(writer, "{value:.16e}")
    }
}

/// Serializes `value` to JSON bytes with a trailing newline.
pub fn to_vec_17<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Float17Formatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail for finite data");
    out.push(b'\n');
    out
}

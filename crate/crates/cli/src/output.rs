//! Report serialization: versioned JSON with fixed-width floats, and CSV.

use std::io::{self, Write};

use hzml::moments::ZeroList;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

pub const SCHEMA: &str = "1";

/// Pretty JSON in which every finite float is written with 17 significant
/// digits and every non-finite float as `null`.
struct FixedFloats<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident),* $(,)?) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
                self.0.$name(w)
            }
        )*
    };
}

impl Formatter for FixedFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    delegate!(begin_array, end_array, end_array_value, begin_object, end_object, begin_object_value, end_object_value);
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    command: &'a str,
    report: &'a T,
}

pub fn to_json<T: Serialize>(command: &str, report: &T) -> serde_json::Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats(PrettyFormatter::new()));
    Envelope {
        schema: SCHEMA,
        command,
        report,
    }
    .serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(buf)
}

pub fn zeros_csv(zl: &ZeroList) -> Vec<u8> {
    let mut out = String::from("index,gamma,bracket_width\n");
    for (i, z) in zl.zeros.iter().enumerate() {
        out.push_str(&format!("{},{:.16e},{:.16e}\n", i + 1, z.gamma, z.bracket_width));
    }
    out.into_bytes()
}

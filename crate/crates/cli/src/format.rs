//! Byte-stable text output: `%.12g`-style numeric formatting and CSV
//! assembly (UTF-8, LF line endings, `#` comment preamble, fixed header).

/// Format with 12 significant digits, trailing zeros trimmed, switching to
/// scientific notation outside the fixed-point window (the behaviour of
/// C's `%.12g`).
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    // round to 12 significant digits first so boundary cases pick the
    // notation of the rounded value
    let sci = format!("{:.11e}", x);
    let (mantissa, exponent) = sci.split_once('e').expect("{:e} always carries an exponent");
    let exponent: i32 = exponent.parse().expect("exponent is an integer");
    if !(-4..12).contains(&exponent) {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exponent.abs())
    } else {
        let decimals = (11 - exponent).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        }
    }
}

/// Incremental CSV builder: comment preamble, one header row, data rows.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new() -> Self {
        Csv { buf: String::new() }
    }

    pub fn comment(&mut self, text: &str) -> &mut Self {
        self.buf.push_str("# ");
        self.buf.push_str(text);
        self.buf.push('\n');
        self
    }

    pub fn header(&mut self, columns: &[&str]) -> &mut Self {
        self.buf.push_str(&columns.join(","));
        self.buf.push('\n');
        self
    }

    pub fn row(&mut self, fields: &[String]) -> &mut Self {
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
        self
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

use std::io::Write;

use serde::Serialize;

/// Fixed leading columns of every result table.
pub const COLUMNS: [&str; 9] = [
    "omega_au",
    "lambda_nm",
    "P_real",
    "P_imag",
    "beta_AC",
    "beta_ioni",
    "gamma_i",
    "sigma_i",
    "flags",
];

pub const THRESHOLD_OPEN: &str = "threshold-open";
pub const NEAR_RESONANCE_GAP: &str = "near-resonance-gap";
pub const RESONANCE_BRACKET: &str = "resonance-bracket";
pub const COMPUTE_ERROR: &str = "compute-error";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub omega_au: f64,
    pub lambda_nm: f64,
    #[serde(rename = "P_real")]
    pub p_real: Option<f64>,
    #[serde(rename = "P_imag")]
    pub p_imag: Option<f64>,
    #[serde(rename = "beta_AC")]
    pub beta_ac: Option<f64>,
    pub beta_ioni: Option<f64>,
    pub gamma_i: Option<f64>,
    pub sigma_i: Option<f64>,
    pub flags: String,
    /// Mode-specific trailing columns, in `Table::extra_columns` order.
    #[serde(skip)]
    pub extra: Vec<Option<f64>>,
}

impl ResultRow {
    pub fn gap(omega_au: f64, lambda_nm: f64, flags: &[&str]) -> Self {
        Self {
            omega_au,
            lambda_nm,
            p_real: None,
            p_imag: None,
            beta_ac: None,
            beta_ioni: None,
            gamma_i: None,
            sigma_i: None,
            flags: flags.join(","),
            extra: Vec::new(),
        }
    }

    pub fn add_flag(&mut self, flag: &str) {
        if self.flags.split(',').any(|f| f == flag) {
            return;
        }
        if !self.flags.is_empty() {
            self.flags.push(',');
        }
        self.flags.push_str(flag);
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub version: String,
    pub config_hash: String,
    pub config_json: serde_json::Value,
    pub extra_columns: Vec<&'static str>,
    pub rows: Vec<ResultRow>,
}

/// `d.ddddddddddde±XX`: 12 significant digits, signed two-digit exponent.
pub fn format_number(x: f64) -> String {
    // print −0 as 0
    let x = if x == 0.0 { 0.0 } else { x };
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.11e}");
    let (mantissa, exp) = s.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn cell(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

impl Table {
    pub fn metadata_line(&self) -> String {
        format!("# acstark {} config-sha256={}", self.version, self.config_hash)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", self.metadata_line())?;
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let header: Vec<&str> = COLUMNS.iter().chain(&self.extra_columns).copied().collect();
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![
                format_number(r.omega_au),
                format_number(r.lambda_nm),
                cell(r.p_real),
                cell(r.p_imag),
                cell(r.beta_ac),
                cell(r.beta_ioni),
                cell(r.gamma_i),
                cell(r.sigma_i),
                r.flags.clone(),
            ];
            rec.extend(r.extra.iter().map(|&v| cell(v)));
            w.write_record(&rec)?;
        }
        w.flush()
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut v = serde_json::to_value(r).expect("row serializes");
                let obj = v.as_object_mut().expect("row is an object");
                for (name, x) in self.extra_columns.iter().zip(&r.extra) {
                    obj.insert((*name).to_string(), serde_json::to_value(x).expect("number"));
                }
                v
            })
            .collect();
        let doc = serde_json::json!({
            "version": self.version,
            "config_hash": self.config_hash,
            "config": self.config_json,
            "columns": COLUMNS.iter().chain(&self.extra_columns).collect::<Vec<_>>(),
            "rows": rows,
        });
        serde_json::to_writer_pretty(&mut out, &doc)?;
        writeln!(out)
    }
}

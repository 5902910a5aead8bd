//! Report types shared by the commands. The JSON layout is described in docs/report.schema.json.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Numeric,
}

#[derive(Clone, Debug, Serialize)]
pub struct Run {
    pub id: String,
    pub params: BTreeMap<String, i64>,
    pub status: Status,
    pub provenance: Provenance,
    pub lhs: String,
    pub rhs: String,
    /// |lhs - rhs| plus propagated error; numeric runs only.
    pub delta: Option<f64>,
    pub tolerance: Option<f64>,
    /// Working precision in decimal digits; numeric runs only.
    pub digits: Option<u32>,
    /// Present only with --timings, so default reports stay byte-stable.
    pub elapsed_ms: Option<f64>,
    pub note: Option<String>,
    #[serde(skip)]
    pub key: Vec<i64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub digits: u32,
    pub tolerance: f64,
    pub runs: Vec<Run>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, digits: u32, tolerance: f64, mut runs: Vec<Run>) -> Self {
        runs.sort_by(|a, b| (&a.id, &a.key).cmp(&(&b.id, &b.key)));
        let mut summary = Summary::default();
        for r in &runs {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skip => summary.skip += 1,
            }
        }
        Report { command: command.into(), version: env!("CARGO_PKG_VERSION").into(), digits, tolerance, runs, summary }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0 && self.summary.skip == 0
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.runs {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let detail = match (r.delta, &r.note) {
                (_, Some(n)) => n.clone(),
                (Some(d), None) => format!("|d|={d:.2e}"),
                (None, None) => "exact".into(),
            };
            out += &format!("{status} {} {} {detail}\n", r.id, params.join(" "));
        }
        out += &format!("{} pass, {} fail, {} skip\n", self.summary.pass, self.summary.fail, self.summary.skip);
        out
    }
}

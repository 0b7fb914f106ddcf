//! Batch front end: runs the pipeline up to a requested stage and writes its reports.
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;

use crate::dimer::{DimerDocument, DimerModel};
use crate::divisors::arrow_labels;
use crate::error::{Error, Result};
use crate::matchings::Normalization;
use crate::moduli::{build_fan, StabilityParam};
use crate::reid::{chamber_and_walls, classify_psi};
use crate::report::{
    to_json, ChamberReport, FanReport, LabelsReport, MatchingsReport, PsiReportFile, ValidateReport,
};
use crate::svg::{quiver_svg, triangulation_svg};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Command {
    Validate,
    Matchings,
    Fan,
    Labels,
    Chamber,
    Psi,
    All,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub input: PathBuf,
    /// `special` or comma separated weights such as `-2,1,1`.
    pub theta: String,
    pub out: PathBuf,
    pub svg: bool,
}

/// Process exit status for an error.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::NonGeneric(_) => 2,
        Error::CrossCheck { .. } | Error::Inconsistent(_) => 3,
        Error::Parse(_) | Error::Invalid(_) | Error::Input(_) | Error::Io(_) => 1,
    }
}

struct Writer<'a> {
    dir: &'a Path,
    written: Vec<PathBuf>,
}

impl Writer<'_> {
    fn write(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, text)?;
        self.written.push(path);
        Ok(())
    }
}

/// Runs every stage up to the requested one. Only the requested stage writes its report,
/// except `all`, which writes every report. Returns the files written.
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let text = fs::read_to_string(&config.input)?;
    fs::create_dir_all(&config.out)?;
    let mut out = Writer { dir: &config.out, written: Vec::new() };
    let wants = |c: Command| config.command == c || config.command == Command::All;

    let doc: DimerDocument = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let model = DimerModel::from_document(doc)?;
    let diagnostics = crate::dimer::validate_dimer(&model);
    if wants(Command::Validate) {
        out.write("validate.json", &to_json(&ValidateReport::new(&model, &diagnostics)))?;
    }
    if !diagnostics.is_empty() {
        return Err(Error::Invalid(diagnostics));
    }
    if config.command == Command::Validate {
        return Ok(out.written);
    }

    let theta = StabilityParam::parse(&config.theta, model.vertex_count())?;
    if config.command == Command::Matchings {
        let (_, matchings, polygon) = crate::matchings::matching_polygon(&model, Normalization::MinCorner)?;
        out.write("matchings.json", &to_json(&MatchingsReport::new(&matchings, &polygon)))?;
        return Ok(out.written);
    }

    let fan = build_fan(&model, &theta, Normalization::MinCorner)?;
    if wants(Command::Matchings) {
        out.write("matchings.json", &to_json(&MatchingsReport::new(&fan.matchings, &fan.polygon)))?;
    }
    if wants(Command::Fan) {
        out.write("fan.json", &to_json(&FanReport::new(&model, &fan)))?;
    }
    let labels = arrow_labels(&model, &fan);
    if config.svg {
        out.write("triangulation.svg", &triangulation_svg(&fan))?;
        if model.positions().is_some() {
            out.write("quiver.svg", &quiver_svg(&model, &labels)?)?;
        }
    }
    if wants(Command::Labels) {
        out.write("labels.json", &to_json(&LabelsReport::new(&model, &labels)))?;
    }
    match config.command {
        Command::Chamber => {
            let (chamber, walls) = chamber_and_walls(&model, &fan, &labels)?;
            out.write("chamber.json", &to_json(&ChamberReport::from_parts(&fan, &chamber, &walls)))?;
        }
        Command::Psi | Command::All => {
            let report = classify_psi(&model, &fan)?;
            if wants(Command::Chamber) {
                out.write("chamber.json", &to_json(&ChamberReport::new(&fan, &report)))?;
            }
            out.write("psi.json", &to_json(&PsiReportFile::new(&fan, &report)))?;
        }
        _ => {}
    }
    Ok(out.written)
}

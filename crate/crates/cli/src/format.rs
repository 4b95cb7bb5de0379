//! On-disk formats: groups, straight-line programs, rationals and reports.
//!
//! Points are 0-based in cycle notation; letters are 1-based everywhere
//! (`x1` is the first letter, and SLP `input` instructions name letter 1 as 1).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use solvword_core::probability::{ProbabilityResult, Ratio};
use solvword_core::slp::WordLike;
use solvword_core::synthesis::{SynthesisReport, VerifyReport};
use solvword_core::{Instruction, Permutation, PermutationGroup, StraightLineProgram, Word};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(default)]
    pub name: String,
    pub degree: usize,
    pub generators: Vec<String>,
}

impl GroupFile {
    pub fn to_group(&self) -> CliResult<PermutationGroup> {
        Ok(PermutationGroup::from_cycle_strings(
            self.degree,
            &self.generators,
        )?)
    }

    pub fn from_group(name: &str, g: &PermutationGroup) -> Self {
        GroupFile {
            name: name.to_string(),
            degree: g.degree(),
            generators: g
                .generators()
                .iter()
                .map(Permutation::to_cycle_string)
                .collect(),
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_group(path: &Path) -> CliResult<(String, PermutationGroup)> {
    let file: GroupFile = read_json(path)?;
    let name = if file.name.is_empty() {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    } else {
        file.name.clone()
    };
    Ok((name, file.to_group()?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstructionFile {
    pub op: String,
    pub args: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlpFile {
    pub arity: usize,
    pub output: Option<usize>,
    pub instructions: Vec<InstructionFile>,
}

impl SlpFile {
    pub fn from_slp(slp: &StraightLineProgram) -> Self {
        let ins = |op: &str, args: Vec<i64>| InstructionFile {
            op: op.to_string(),
            args,
        };
        SlpFile {
            arity: slp.arity(),
            output: slp.output(),
            instructions: slp
                .instructions()
                .iter()
                .map(|i| match *i {
                    Instruction::Input(l) => ins("input", vec![l as i64 + 1]),
                    Instruction::Mul(a, b) => ins("mul", vec![a as i64, b as i64]),
                    Instruction::Inv(a) => ins("inv", vec![a as i64]),
                    Instruction::Pow(a, k) => ins("pow", vec![a as i64, k]),
                    Instruction::Comm(a, b) => ins("comm", vec![a as i64, b as i64]),
                })
                .collect(),
        }
    }

    pub fn to_slp(&self) -> CliResult<StraightLineProgram> {
        let index = |v: i64| -> CliResult<usize> {
            usize::try_from(v)
                .map_err(|_| CliError::Input(format!("negative instruction reference {v}")))
        };
        let instructions = self
            .instructions
            .iter()
            .enumerate()
            .map(|(i, ins)| {
                let bad =
                    || CliError::Input(format!("instruction {i}: bad arguments for '{}'", ins.op));
                Ok(match (ins.op.as_str(), ins.args.as_slice()) {
                    ("input", &[l]) if l >= 1 => Instruction::Input(index(l)? - 1),
                    ("mul", &[a, b]) => Instruction::Mul(index(a)?, index(b)?),
                    ("inv", &[a]) => Instruction::Inv(index(a)?),
                    ("pow", &[a, k]) => Instruction::Pow(index(a)?, k),
                    ("comm", &[a, b]) => Instruction::Comm(index(a)?, index(b)?),
                    ("input" | "mul" | "inv" | "pow" | "comm", _) => return Err(bad()),
                    (op, _) => {
                        return Err(CliError::Input(format!(
                            "instruction {i}: unknown op '{op}'"
                        )))
                    }
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(StraightLineProgram::from_parts(
            self.arity,
            instructions,
            self.output,
        )?)
    }
}

/// Reads a word given inline, as a text file, as an SLP file, or as the
/// `word_slp` field of a synthesis report.
pub fn load_word(arg: &str) -> CliResult<WordLike> {
    let path = Path::new(arg);
    if !path.is_file() {
        return Ok(WordLike::Word(Word::parse(arg)?));
    }
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|source| CliError::Json {
                path: path.to_path_buf(),
                source,
            })?;
        let slp = value.get("word_slp").cloned().unwrap_or(value);
        let file: SlpFile = serde_json::from_value(slp).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        return Ok(WordLike::Slp(file.to_slp()?));
    }
    Ok(WordLike::Word(Word::parse(text.trim())?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioJson {
    pub num: String,
    pub den: String,
    pub reduced: String,
    pub value: f64,
}

impl From<&Ratio> for RatioJson {
    fn from(r: &Ratio) -> Self {
        RatioJson {
            num: r.num.to_string(),
            den: r.den.to_string(),
            reduced: r.to_string(),
            value: r.to_f64(),
        }
    }
}

fn cycles(t: &[Permutation]) -> Vec<String> {
    t.iter().map(Permutation::to_cycle_string).collect()
}

fn one_based(letters: &[usize]) -> Vec<usize> {
    letters.iter().map(|l| l + 1).collect()
}

#[derive(Serialize)]
pub struct ClassJson {
    pub representative: Vec<String>,
    pub members: u64,
    pub subgroup_order: String,
    pub solvable: bool,
    pub quotient_order: String,
    pub satisfied: bool,
    pub agrees: bool,
}

#[derive(Serialize)]
pub struct OrbitJson {
    pub representative: Vec<String>,
    pub size: usize,
    pub selected: bool,
    pub satisfied: u64,
}

#[derive(Serialize)]
pub struct BoundsJson {
    pub lower: RatioJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<RatioJson>,
}

/// The product a word was read from, for independent re-evaluation.
#[derive(Serialize, Deserialize)]
pub struct ProductJson {
    pub coordinate_degrees: Vec<usize>,
    /// `columns[j][i]`: letter `j` at coordinate `i`.
    pub columns: Vec<Vec<String>>,
    pub target: Vec<String>,
}

#[derive(Serialize)]
pub struct SynthesisJson {
    pub group: String,
    pub n_or_d: usize,
    pub word_slp: SlpFile,
    pub word_slp_length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_flat: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_flat_length: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub orbits: Vec<OrbitJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_probability: Option<RatioJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub satisfying_generating: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selected_satisfying: Option<u64>,
    pub verified: bool,
    pub letters_used: Vec<usize>,
    pub letters_upper_bound_only: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub product: ProductJson,
}

impl SynthesisJson {
    pub fn new(group: &str, r: &SynthesisReport) -> Self {
        SynthesisJson {
            group: group.to_string(),
            n_or_d: r.arity,
            word_slp: SlpFile::from_slp(&r.word),
            word_slp_length: r.word.len(),
            word_flat: r.word_flat.as_ref().map(|w| w.to_string()),
            word_flat_length: r.word_flat.as_ref().map(|w| w.len()),
            classes: r
                .classes
                .iter()
                .map(|c| ClassJson {
                    representative: cycles(&c.representative),
                    members: c.members,
                    subgroup_order: c.subgroup_order.to_string(),
                    solvable: c.solvable,
                    quotient_order: c.quotient_order.to_string(),
                    satisfied: c.satisfied,
                    agrees: c.agrees,
                })
                .collect(),
            orbits: r
                .orbits
                .iter()
                .map(|o| OrbitJson {
                    representative: cycles(&o.representative),
                    size: o.size,
                    selected: o.selected,
                    satisfied: o.satisfied,
                })
                .collect(),
            exact_probability: r.exact.as_ref().map(RatioJson::from),
            bounds: r.bounds.as_ref().map(|b| BoundsJson {
                lower: (&b.lower).into(),
                upper: b.upper.as_ref().map(RatioJson::from),
            }),
            satisfying_generating: r.satisfying_generating,
            selected_satisfying: r.selected_satisfying,
            verified: r.verified,
            letters_used: one_based(&r.letters_used),
            letters_upper_bound_only: r.letters_upper_bound_only,
            notes: r.notes.clone(),
            product: ProductJson {
                coordinate_degrees: r.target.iter().map(Permutation::degree).collect(),
                columns: r.columns.iter().map(|c| cycles(c)).collect(),
                target: cycles(&r.target),
            },
        }
    }
}

#[derive(Serialize)]
pub struct EstimateJson {
    pub p: f64,
    pub lo: f64,
    pub hi: f64,
    pub n: u64,
    pub seed: u64,
}

#[derive(Serialize)]
pub struct ProfileRowJson {
    pub representative: Vec<String>,
    pub members: u64,
    pub subgroup_order: String,
    pub solvable: bool,
    pub satisfied: bool,
}

#[derive(Serialize)]
pub struct ProfileCountsJson {
    pub solvable_satisfying: u64,
    pub nonsolvable_satisfying: u64,
    pub total: u64,
}

#[derive(Serialize)]
pub struct ProbabilityJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<RatioJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<EstimateJson>,
    pub letters: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<ProfileRowJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile_counts: Option<ProfileCountsJson>,
}

impl From<&ProbabilityResult> for ProbabilityJson {
    fn from(r: &ProbabilityResult) -> Self {
        ProbabilityJson {
            exact: r.exact.as_ref().map(RatioJson::from),
            estimate: r.estimate.as_ref().map(|e| EstimateJson {
                p: e.p,
                lo: e.lo,
                hi: e.hi,
                n: e.samples,
                seed: e.seed,
            }),
            letters: one_based(&r.letters),
            profile: None,
            profile_counts: None,
        }
    }
}

#[derive(Serialize)]
pub struct CounterexampleJson {
    pub tuple: Vec<String>,
    pub solvable: bool,
    pub satisfied: bool,
}

#[derive(Serialize)]
pub struct VerifyJson {
    pub group: String,
    pub n: usize,
    pub checked: u64,
    pub agreed: u64,
    pub passed: bool,
    pub counterexamples: Vec<CounterexampleJson>,
}

impl VerifyJson {
    pub fn new(group: &str, n: usize, r: &VerifyReport) -> Self {
        VerifyJson {
            group: group.to_string(),
            n,
            checked: r.checked,
            agreed: r.agreed,
            passed: r.passed,
            counterexamples: r
                .counterexamples
                .iter()
                .map(|c| CounterexampleJson {
                    tuple: cycles(&c.tuple),
                    solvable: c.solvable,
                    satisfied: c.satisfied,
                })
                .collect(),
        }
    }
}

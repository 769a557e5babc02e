//! Line-based circuit descriptions.
//!
//! ```text
//! # GHZ pair
//! family prod
//! qubits 2
//! measure 2
//! prep 0 bloch 0 0 1
//! prep 1 gates H S
//! gate H 0
//! gate CNOT 0 1
//! ```
//!
//! IQP circuits list one `xrow b_1 … b_n` per Hamiltonian term. Encoded
//! circuits take `inner <path>` or a bare `inner` followed by an indented
//! block holding the inner description.

use std::fs;
use std::path::{Path, PathBuf};

use super::{ce_encode, BinaryMatrix, Circuit, IqpCircuit, ProdCircuit};
use crate::stabcore::{bloch_from_gate_word, Gate, ProductState};
use crate::{Error, Result};

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| perr(line, format!("{what} must be a non-negative integer, got `{tok}`")))
}

fn parse_f64(tok: Option<&str>, line: usize, what: &str) -> Result<f64> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| perr(line, format!("{what} must be a number, got `{tok}`")))
}

/// Parses a description; `inner <path>` is resolved against the working directory.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    parse_circuit_with_base(text, None)
}

/// Parses the file at `path`; relative `inner` paths resolve against its directory.
pub fn parse_circuit_file(path: impl AsRef<Path>) -> Result<Circuit> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_circuit_with_base(&text, path.parent())
}

pub fn parse_circuit_with_base(text: &str, base: Option<&Path>) -> Result<Circuit> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    parse_lines(&lines, base)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn indentation(line: &str) -> usize {
    line.len() - line.trim_start().len()
}

#[derive(Default)]
struct Header {
    family: Option<(usize, String)>,
    qubits: Option<usize>,
    measure: Option<(usize, usize)>,
}

fn parse_lines(lines: &[(usize, &str)], base: Option<&Path>) -> Result<Circuit> {
    let mut header = Header::default();
    let mut preps: Vec<(usize, usize, [f64; 3])> = Vec::new();
    let mut gates: Vec<(usize, Gate)> = Vec::new();
    let mut xrows: Vec<(usize, Vec<u8>)> = Vec::new();
    let mut inner: Option<(usize, Circuit)> = None;
    let last_line = lines.last().map_or(0, |l| l.0);

    let mut i = 0;
    while i < lines.len() {
        let (ln, raw) = lines[i];
        i += 1;
        let body = strip_comment(raw);
        let mut toks = body.split_whitespace();
        let Some(directive) = toks.next() else { continue };
        match directive {
            "family" => {
                let fam = toks.next().ok_or_else(|| perr(ln, "missing family tag"))?;
                if !matches!(fam, "prod" | "iqp" | "encoded") {
                    return Err(perr(ln, format!("unknown family tag `{fam}`")));
                }
                if header.family.is_some() {
                    return Err(perr(ln, "duplicate family directive"));
                }
                header.family = Some((ln, fam.to_string()));
            }
            "qubits" => header.qubits = Some(parse_usize(toks.next(), ln, "qubit count")?),
            "measure" => header.measure = Some((ln, parse_usize(toks.next(), ln, "measured count")?)),
            "prep" => {
                let q = parse_usize(toks.next(), ln, "prep qubit")?;
                let r = match toks.next() {
                    Some("bloch") => {
                        let r = [
                            parse_f64(toks.next(), ln, "r_x")?,
                            parse_f64(toks.next(), ln, "r_y")?,
                            parse_f64(toks.next(), ln, "r_z")?,
                        ];
                        if toks.next().is_some() {
                            return Err(perr(ln, "trailing tokens after bloch vector"));
                        }
                        r
                    }
                    Some("gates") => {
                        let word: Vec<&str> = toks.by_ref().collect();
                        if word.is_empty() {
                            return Err(perr(ln, "empty gate word"));
                        }
                        bloch_from_gate_word(&word).map_err(|e| perr(ln, e.to_string()))?
                    }
                    Some(other) => return Err(perr(ln, format!("expected `bloch` or `gates`, got `{other}`"))),
                    None => return Err(perr(ln, "missing preparation kind")),
                };
                preps.push((ln, q, r));
            }
            "gate" => {
                let name = toks.next().ok_or_else(|| perr(ln, "missing gate name"))?;
                let qubits = toks
                    .map(|t| parse_usize(Some(t), ln, "gate qubit"))
                    .collect::<Result<Vec<_>>>()?;
                let g = Gate::from_name(name, &qubits).map_err(|e| perr(ln, e.to_string()))?;
                gates.push((ln, g));
            }
            "xrow" => {
                let row = toks
                    .map(|t| match t {
                        "0" => Ok(0u8),
                        "1" => Ok(1u8),
                        _ => Err(perr(ln, format!("xrow entries must be 0 or 1, got `{t}`"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                xrows.push((ln, row));
            }
            "inner" => {
                if inner.is_some() {
                    return Err(perr(ln, "duplicate inner directive"));
                }
                let circuit = match toks.next() {
                    Some(path) => {
                        let mut p = PathBuf::from(path);
                        if p.is_relative() {
                            if let Some(b) = base {
                                p = b.join(p);
                            }
                        }
                        parse_circuit_file(&p).map_err(|e| perr(ln, format!("inner {path}: {e}")))?
                    }
                    None => {
                        let start = i;
                        let own_indent = indentation(raw);
                        while i < lines.len() {
                            let l = lines[i].1;
                            let indented = indentation(l) > own_indent;
                            if !(indented || strip_comment(l).trim().is_empty()) {
                                break;
                            }
                            i += 1;
                        }
                        if start == i {
                            return Err(perr(ln, "`inner` without a path needs an indented block"));
                        }
                        parse_lines(&lines[start..i], base)?
                    }
                };
                inner = Some((ln, circuit));
            }
            other => return Err(perr(ln, format!("unknown directive `{other}`"))),
        }
    }

    let (fam_line, family) = header.family.ok_or_else(|| perr(last_line.max(1), "missing `family` directive"))?;
    match family.as_str() {
        "prod" => {
            if !xrows.is_empty() || inner.is_some() {
                return Err(perr(fam_line, "prod circuits accept only prep and gate directives"));
            }
            let n = header.qubits.ok_or_else(|| perr(fam_line, "missing `qubits` directive"))?;
            let (mline, k) = header.measure.ok_or_else(|| perr(fam_line, "missing `measure` directive"))?;
            let mut prep = ProductState::zeros(n);
            for (ln, q, r) in preps {
                if q >= n {
                    return Err(perr(ln, format!("prep qubit {q} out of range for {n} qubits")));
                }
                prep.set_bloch(q, r).map_err(|e| perr(ln, e.to_string()))?;
            }
            for (ln, g) in &gates {
                g.validate(n).map_err(|e| perr(*ln, e.to_string()))?;
            }
            let gates = gates.into_iter().map(|(_, g)| g).collect();
            Ok(ProdCircuit::new(prep, gates, k).map_err(|e| perr(mline, e.to_string()))?.into())
        }
        "iqp" => {
            if !preps.is_empty() || !gates.is_empty() || inner.is_some() {
                return Err(perr(fam_line, "iqp circuits accept only xrow directives"));
            }
            let n = header.qubits.ok_or_else(|| perr(fam_line, "missing `qubits` directive"))?;
            let (mline, k) = header.measure.ok_or_else(|| perr(fam_line, "missing `measure` directive"))?;
            for (ln, row) in &xrows {
                if row.len() != n {
                    return Err(perr(*ln, format!("xrow has {} entries, expected {n}", row.len())));
                }
            }
            let rows: Vec<Vec<u8>> = xrows.into_iter().map(|(_, r)| r).collect();
            let program = if rows.is_empty() {
                BinaryMatrix::zeros(0, n)
            } else {
                BinaryMatrix::from_rows(&rows)
            }
            .map_err(|e| perr(fam_line, e.to_string()))?;
            Ok(IqpCircuit::new(program, k).map_err(|e| perr(mline, e.to_string()))?.into())
        }
        _ => {
            if !preps.is_empty() || !gates.is_empty() || !xrows.is_empty() {
                return Err(perr(fam_line, "encoded circuits accept only an inner directive"));
            }
            if header.qubits.is_some() {
                return Err(perr(fam_line, "encoded circuits take their size from the inner circuit"));
            }
            let (_, inner) = inner.ok_or_else(|| perr(fam_line, "missing `inner` directive"))?;
            let encoded = ce_encode(inner).map_err(|e| perr(fam_line, e.to_string()))?;
            if let Some((mline, k)) = header.measure {
                if k != encoded.measured() {
                    return Err(perr(
                        mline,
                        format!("encoded circuit measures {} bits, not {k}", encoded.measured()),
                    ));
                }
            }
            Ok(encoded.into())
        }
    }
}

/// Canonical text form; `parse_circuit(&serialize_circuit(c)) == c`.
pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    write_circuit(c, &mut out, "");
    out
}

fn write_circuit(c: &Circuit, out: &mut String, indent: &str) {
    let mut line = |s: String| {
        out.push_str(indent);
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("family {}", c.family()));
    match c {
        Circuit::Prod(p) => {
            line(format!("qubits {}", p.num_qubits()));
            line(format!("measure {}", p.measured()));
            for (q, r) in p.prep().bloch_vectors().iter().enumerate() {
                if *r != [0.0, 0.0, 1.0] {
                    line(format!("prep {q} bloch {} {} {}", r[0], r[1], r[2]));
                }
            }
            for g in p.gates() {
                line(format!("gate {g}"));
            }
        }
        Circuit::Iqp(q) => {
            let n = q.num_qubits();
            line(format!("qubits {n}"));
            line(format!("measure {}", q.measured()));
            for &row in q.program().rows() {
                let bits: Vec<&str> = (0..n).map(|j| if (row >> j) & 1 == 1 { "1" } else { "0" }).collect();
                line(format!("xrow {}", bits.join(" ")));
            }
        }
        Circuit::Encoded(e) => {
            line(format!("measure {}", e.measured()));
            line("inner".to_string());
            let nested = format!("{indent}  ");
            write_circuit(e.inner(), out, &nested);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_prod() {
        let c = parse_circuit("family prod\nqubits 1\nmeasure 1\nprep 0 bloch 0 0 1\ngate H 0\n").unwrap();
        let Circuit::Prod(p) = &c else { panic!() };
        assert_eq!(p.num_qubits(), 1);
        assert_eq!(p.gates(), &[Gate::H(0)]);
    }

    #[test]
    fn minimal_iqp() {
        let c = parse_circuit("family iqp\nqubits 2\nmeasure 2\nxrow 1 1\n").unwrap();
        let Circuit::Iqp(q) = &c else { panic!() };
        assert_eq!(q.program().num_rows(), 1);
        assert_eq!(q.program().row(0), 0b11);
    }

    #[test]
    fn repeated_index_reports_line() {
        let err = parse_circuit("family prod\nqubits 2\nmeasure 2\ngate CNOT 0 0\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 4,
                message: "repeated qubit index 0 in two-qubit gate".into()
            }
        );
    }

    #[test]
    fn invariant_and_syntax_errors() {
        assert!(matches!(
            parse_circuit("family prod\nqubits 2\nmeasure 3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_circuit("family qaoa\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_circuit("family prod\nqubits 1\nmeasure 1\ngate T 0\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            parse_circuit("family iqp\nqubits 2\nmeasure 1\nxrow 1\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(parse_circuit("qubits 1\n").is_err());
    }

    #[test]
    fn prep_gate_words_and_comments() {
        let c = parse_circuit("# plus state\nfamily prod\nqubits 1 # one\nmeasure 1\nprep 0 gates H\n").unwrap();
        let Circuit::Prod(p) = &c else { panic!() };
        assert_eq!(p.prep().bloch(0), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn inline_encoded_round_trip() {
        let text = "family encoded\ninner\n  family prod\n  qubits 2\n  measure 2\n  gate H 0\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.measured(), 3);
        assert_eq!(parse_circuit(&serialize_circuit(&c)).unwrap(), c);
    }

    #[test]
    fn nested_encoded_blocks() {
        let text = "family encoded\ninner\n  family encoded\n  inner\n    family iqp\n    qubits 1\n    measure 1\n    xrow 1\n  measure 2\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.measured(), 3);
        assert_eq!(parse_circuit(&serialize_circuit(&c)).unwrap(), c);
    }

    #[test]
    fn encoded_inner_from_file() {
        let dir = std::env::temp_dir().join(format!("bornbox-format-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("coin.qc"), "family prod\nqubits 1\nmeasure 1\ngate H 0\n").unwrap();
        std::fs::write(dir.join("enc.qc"), "family encoded\ninner coin.qc\n").unwrap();
        let c = parse_circuit_file(dir.join("enc.qc")).unwrap();
        assert_eq!(c.measured(), 2);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}

//! Flat-file formats. Every writer emits optional `#` comment lines, then a
//! header row, then data rows. Readers skip comments and blank lines.

use std::io::{BufRead, Write};

use num_bigint::BigInt;

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::quadrature;
use crate::spectral::{CharPoly, Spectrum};
use crate::strategy::{SampledStrategy, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    /// `index,value`
    Discrete,
    /// `x,value`
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyFile {
    pub kind: StrategyKind,
    pub values: Vec<f64>,
}

impl StrategyFile {
    pub fn into_discrete(self) -> Result<Strategy> {
        Strategy::new(self.values)
    }

    pub fn into_sampled(self) -> Result<SampledStrategy> {
        SampledStrategy::new(self.values)
    }
}

fn comments<W: Write>(w: &mut W, lines: &[String]) -> Result<()> {
    for line in lines {
        writeln!(w, "# {line}")?;
    }
    Ok(())
}

pub fn write_strategy_csv<W: Write>(
    w: &mut W,
    kind: StrategyKind,
    values: &[f64],
    header: &[String],
) -> Result<()> {
    comments(w, header)?;
    match kind {
        StrategyKind::Discrete => {
            writeln!(w, "index,value")?;
            for (j, v) in values.iter().enumerate() {
                writeln!(w, "{j},{v}")?;
            }
        }
        StrategyKind::Sampled => {
            writeln!(w, "x,value")?;
            let xs = quadrature::grid(values.len() - 1);
            for (x, v) in xs.iter().zip(values) {
                writeln!(w, "{x},{v}")?;
            }
        }
    }
    Ok(())
}

/// Data lines with their 1-based line numbers.
fn data_lines<R: BufRead>(r: R) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push((i + 1, trimmed.to_string()));
    }
    Ok(out)
}

fn parse_f64(line: usize, s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse {
        line,
        msg: format!("not a number: `{s}`"),
    })
}

fn split_pair(line: usize, s: &str) -> Result<(String, String)> {
    let mut parts = s.split(',');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) => Ok((a.trim().to_string(), b.trim().to_string())),
        _ => Err(Error::Parse {
            line,
            msg: "expected two comma-separated fields".into(),
        }),
    }
}

pub fn read_strategy_csv<R: BufRead>(r: R) -> Result<StrategyFile> {
    let lines = data_lines(r)?;
    let (header_line, header) = lines.first().ok_or(Error::Parse {
        line: 0,
        msg: "empty strategy file".into(),
    })?;
    let kind = match header.replace(' ', "").as_str() {
        "index,value" => StrategyKind::Discrete,
        "x,value" => StrategyKind::Sampled,
        other => {
            return Err(Error::Parse {
                line: *header_line,
                msg: format!("unknown header `{other}`"),
            })
        }
    };
    let mut values = Vec::with_capacity(lines.len() - 1);
    for (n, line) in &lines[1..] {
        let (key, value) = split_pair(*n, line)?;
        if kind == StrategyKind::Discrete {
            let idx: usize = key.parse().map_err(|_| Error::Parse {
                line: *n,
                msg: format!("bad index `{key}`"),
            })?;
            if idx != values.len() {
                return Err(Error::Parse {
                    line: *n,
                    msg: format!("expected index {}, found {idx}", values.len()),
                });
            }
        } else {
            parse_f64(*n, &key)?;
        }
        values.push(parse_f64(*n, &value)?);
    }
    if values.len() < 2 {
        return Err(Error::Parse {
            line: *header_line,
            msg: "a strategy needs at least two values".into(),
        });
    }
    Ok(StrategyFile { kind, values })
}

/// `t,regime,mca,mass,l2,payoff_vs_initial,y_0,…,y_M`.
pub fn write_trajectory_csv<W: Write>(
    w: &mut W,
    traj: &Trajectory,
    header: &[String],
) -> Result<()> {
    comments(w, header)?;
    if let Some(ts) = traj.switch_time {
        writeln!(w, "# switch_time {ts}")?;
    }
    write!(w, "t,regime,mca,mass,l2,payoff_vs_initial")?;
    for j in 0..traj.dim() {
        write!(w, ",y_{j}")?;
    }
    writeln!(w)?;
    for i in 0..traj.len() {
        let d = &traj.diagnostics[i];
        write!(
            w,
            "{},{},{},{},{},{}",
            traj.times[i], traj.regime_flags[i], d.mca, d.mass, d.l2, d.payoff_vs_initial
        )?;
        for v in &traj.states[i] {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Rows of a numeric CSV after its header, as `(header fields, rows)`.
pub fn read_numeric_csv<R: BufRead>(r: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let lines = data_lines(r)?;
    let Some((_, header)) = lines.first() else {
        return Ok((Vec::new(), Vec::new()));
    };
    let fields: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let mut rows = Vec::with_capacity(lines.len() - 1);
    for (n, line) in &lines[1..] {
        let row = line
            .split(',')
            .map(|s| parse_f64(*n, s))
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != fields.len() {
            return Err(Error::Parse {
                line: *n,
                msg: format!("expected {} fields, found {}", fields.len(), row.len()),
            });
        }
        rows.push(row);
    }
    Ok((fields, rows))
}

pub fn write_spectrum_csv<W: Write>(
    w: &mut W,
    spectrum: &Spectrum,
    header: &[String],
) -> Result<()> {
    comments(w, header)?;
    writeln!(w, "re,im,multiplicity")?;
    for e in &spectrum.eigenvalues {
        writeln!(w, "{},{},{}", e.re, e.im, e.multiplicity)?;
    }
    Ok(())
}

/// One coefficient per line, ascending powers.
pub fn write_charpoly<W: Write>(w: &mut W, poly: &CharPoly, header: &[String]) -> Result<()> {
    comments(w, header)?;
    for c in poly.coefficients() {
        writeln!(w, "{c}")?;
    }
    Ok(())
}

pub fn read_charpoly<R: BufRead>(r: R) -> Result<Vec<BigInt>> {
    data_lines(r)?
        .into_iter()
        .map(|(n, s)| {
            s.parse::<BigInt>().map_err(|_| Error::Parse {
                line: n,
                msg: format!("not an integer: `{s}`"),
            })
        })
        .collect()
}

/// `vector,index,value` rows, one block per basis vector.
pub fn write_vectors_csv<W: Write>(
    w: &mut W,
    vectors: &[Vec<f64>],
    header: &[String],
) -> Result<()> {
    comments(w, header)?;
    writeln!(w, "vector,index,value")?;
    for (i, v) in vectors.iter().enumerate() {
        for (j, x) in v.iter().enumerate() {
            writeln!(w, "{i},{j},{x}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{simulate_discrete, IntegratorConfig, Method};
    use crate::operators::{build_operators, Regime};
    use crate::spectral::{charpoly_binomial, compute_spectrum};

    #[test]
    fn strategy_round_trip() {
        for kind in [StrategyKind::Discrete, StrategyKind::Sampled] {
            let values = vec![0.1, 1.0 / 3.0, 2.5e-17, 7.0];
            let mut buf = Vec::new();
            write_strategy_csv(&mut buf, kind, &values, &["seed 4".into()]).unwrap();
            let back = read_strategy_csv(buf.as_slice()).unwrap();
            assert_eq!(
                back,
                StrategyFile {
                    kind,
                    values: values.clone()
                }
            );
        }
    }

    #[test]
    fn strategy_parse_errors() {
        let bad_header = "idx,v\n0,1\n1,2\n";
        assert!(matches!(
            read_strategy_csv(bad_header.as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
        let bad_value = "# c\nindex,value\n0,1\n1,abc\n";
        assert!(matches!(
            read_strategy_csv(bad_value.as_bytes()),
            Err(Error::Parse { line: 4, .. })
        ));
        let gap = "index,value\n0,1\n2,1\n";
        assert!(read_strategy_csv(gap.as_bytes()).is_err());
        assert!(read_strategy_csv("index,value\n0,1\n".as_bytes()).is_err());
    }

    #[test]
    fn trajectory_round_trip() {
        let s = Strategy::new(vec![2.0, 1.0, 1.0, 0.5]).unwrap();
        let traj =
            simulate_discrete(&s, &IntegratorConfig::new(Method::Rk4, 0.01, 0.5).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &traj, &[]).unwrap();
        let (fields, rows) = read_numeric_csv(buf.as_slice()).unwrap();
        assert_eq!(
            fields[..6],
            ["t", "regime", "mca", "mass", "l2", "payoff_vs_initial"]
        );
        assert_eq!(fields.len(), 10);
        assert_eq!(rows.len(), traj.len());
        for (row, state) in rows.iter().zip(&traj.states) {
            assert_eq!(&row[6..], state.as_slice());
        }
    }

    #[test]
    fn spectrum_and_charpoly_exports() {
        let mut buf = Vec::new();
        write_charpoly(&mut buf, &charpoly_binomial(2).unwrap(), &["size 3".into()]).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "# size 3\n0\n-3\n0\n-1\n"
        );
        let ints = read_charpoly(buf.as_slice()).unwrap();
        assert_eq!(ints, charpoly_binomial(2).unwrap().coefficients());

        let spec = compute_spectrum(&build_operators(2).unwrap(), Regime::Unconstrained).unwrap();
        let mut buf = Vec::new();
        write_spectrum_csv(&mut buf, &spec, &[]).unwrap();
        let (fields, rows) = read_numeric_csv(buf.as_slice()).unwrap();
        assert_eq!(fields, ["re", "im", "multiplicity"]);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1], vec![0.0, 0.0, 1.0]);
    }
}

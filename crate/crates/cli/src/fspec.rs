//! `--f` mini-language: `entropy`, `power:P`, `kink:T`, `const:C`, `table:PATH`.
//!
//! Table files are two-column CSV (`x,y`), optionally with a header row,
//! covering `[0, 1]` with increasing `x`.

use std::path::Path;

use wehrl_core::majorization::ConcaveFn;

use crate::error::{CliError, CliResult};

fn number(kind: &str, raw: &str) -> CliResult<f64> {
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::validation(format!("{kind}: {raw:?} is not a finite number")))
}

pub fn parse(spec: &str) -> CliResult<ConcaveFn> {
    let spec = spec.trim();
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    let need = |what: &str| arg.ok_or_else(|| CliError::validation(format!("f-spec {head:?} needs {what}")));
    let f = match head {
        "entropy" if arg.is_none() => ConcaveFn::Entropy,
        "power" => ConcaveFn::power(number("power", need("an exponent, e.g. power:0.5")?)?)?,
        "kink" => ConcaveFn::kink(number("kink", need("a position, e.g. kink:0.3")?)?)?,
        "const" => ConcaveFn::constant(number("const", need("a value, e.g. const:0.7")?)?),
        "table" => read_table(Path::new(need("a file path, e.g. table:f.csv")?))?,
        _ => {
            return Err(CliError::validation(format!(
                "unknown f-spec {spec:?}; expected entropy, power:P, kink:T, const:C or table:PATH"
            )))
        }
    };
    Ok(f)
}

fn read_table(path: &Path) -> CliResult<ConcaveFn> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::validation(format!("cannot read table {}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::validation(format!("table {}: {e}", path.display())))?;
        if record.len() != 2 {
            return Err(CliError::validation(format!("table {} row {}: expected two columns", path.display(), i + 1)));
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(x), Ok(y)) => points.push((x, y)),
            // a header row
            _ if i == 0 => continue,
            _ => {
                return Err(CliError::validation(format!(
                    "table {} row {}: not a pair of numbers",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(ConcaveFn::table(points)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn builtin_specs() {
        assert_eq!(parse("entropy").unwrap(), ConcaveFn::Entropy);
        assert_eq!(parse("power:0.5").unwrap(), ConcaveFn::Power(0.5));
        assert_eq!(parse("kink:0.3").unwrap(), ConcaveFn::Kink(0.3));
        assert_eq!(parse("const:0.7").unwrap().eval(0.2), 0.7);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["", "entropy:1", "power", "power:1.5", "power:abc", "kink:2", "cosh", "table:/nonexistent"] {
            assert!(matches!(parse(bad), Err(CliError::Validation(_))), "{bad}");
        }
    }

    #[test]
    fn table_files() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "x,y\n0,0\n0.5,0.4\n1,0.5").unwrap();
        let f = parse(&format!("table:{}", file.path().display())).unwrap();
        assert!((f.eval(0.25) - 0.2).abs() < 1e-15);

        let mut convex = tempfile::NamedTempFile::new().unwrap();
        writeln!(convex, "0,0\n0.5,0.1\n1,1").unwrap();
        assert!(parse(&format!("table:{}", convex.path().display())).is_err());
    }
}

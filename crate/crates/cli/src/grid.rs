//! Flag parsers for grids, spans, and vector literals.

/// Evaluation grid: either a single point or `start:end:count`.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Single(f64),
    Range { start: f64, end: f64, count: usize },
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            GridSpec::Single(v) => vec![v],
            GridSpec::Range { start, end, count } => (0..count)
                .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
                .collect(),
        }
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| format!("{what} '{s}' is not a number"))
}

/// Parses `start:end:count` (count >= 2, start < end) or a bare number.
pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(GridSpec::Single(parse_f64(v, "grid point")?)),
        [a, b, n] => {
            let start = parse_f64(a, "grid start")?;
            let end = parse_f64(b, "grid end")?;
            let count: usize = n
                .trim()
                .parse()
                .map_err(|_| format!("grid count '{n}' is not an integer"))?;
            if count < 2 {
                return Err(format!("grid count must be at least 2, got {count}"));
            }
            if !(start < end) {
                return Err(format!("grid start {start} must be below end {end}"));
            }
            Ok(GridSpec::Range { start, end, count })
        }
        _ => Err(format!("expected 'value' or 'start:end:count', got '{s}'")),
    }
}

/// Parses `start:end` with start < end.
pub fn parse_span(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b] => {
            let start = parse_f64(a, "span start")?;
            let end = parse_f64(b, "span end")?;
            if !(start < end) {
                return Err(format!("span start {start} must be below end {end}"));
            }
            Ok((start, end))
        }
        _ => Err(format!("expected 'start:end', got '{s}'")),
    }
}

/// Parses `x,y,z`.
pub fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got '{s}'"));
    }
    Ok([
        parse_f64(parts[0], "component")?,
        parse_f64(parts[1], "component")?,
        parse_f64(parts[2], "component")?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("1e-5").unwrap(), GridSpec::Single(1e-5));
        let g = parse_grid("0.1:5:200").unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 200);
        assert_eq!(pts[0], 0.1);
        assert_eq!(*pts.last().unwrap(), 5.0);

        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("2:1:10").is_err());
        assert!(parse_grid("0:1:1").is_err());
        assert!(parse_grid("a:1:10").is_err());
    }

    #[test]
    fn span_and_triple() {
        assert_eq!(parse_span("0:2").unwrap(), (0.0, 2.0));
        assert!(parse_span("2:0").is_err());
        assert!(parse_span("1:2:3").is_err());

        assert_eq!(parse_triple("1,1,1").unwrap(), [1.0, 1.0, 1.0]);
        assert_eq!(parse_triple("-1, 2.5, 3e-1").unwrap(), [-1.0, 2.5, 0.3]);
        assert!(parse_triple("1,2").is_err());
    }
}

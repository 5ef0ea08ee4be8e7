//! Channel sweep parsing.

/// Parses `start:stop:step` (endpoints inclusive within `1e-9` of a step)
/// or a single value.
pub fn parse_channel(s: &str) -> Result<Vec<f64>, String> {
    let nums: Vec<f64> = s
        .split(':')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad number '{t}' in channel grid '{s}'")))
        .collect::<Result<_, _>>()?;
    let grid = match nums[..] {
        [p] => vec![p],
        [start, stop, step] => {
            if !(step > 0.0) || stop < start {
                return Err(format!("channel grid '{s}' needs step > 0 and stop >= start"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            // rounding to 12 decimals keeps 0.1 * 3 printing as 0.3
            (0..count).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect()
        }
        _ => return Err(format!("channel grid must be 'start:stop:step' or a single value, got '{s}'")),
    };
    if let Some(p) = grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(format!("channel erasure probability {p} outside [0, 1]"));
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_endpoints() {
        let g = parse_channel("0.40:0.48:0.01").unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[8], 0.48);
        assert_eq!(parse_channel("0:0.4:0.1").unwrap()[3], 0.3);
        assert_eq!(parse_channel("0.3").unwrap(), vec![0.3]);
        assert_eq!(parse_channel("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(parse_channel("0.5:0.4:0.01").is_err());
        assert!(parse_channel("0.1:0.2:0").is_err());
        assert!(parse_channel("0.1:2:0.5").is_err());
        assert!(parse_channel("a").is_err());
        assert!(parse_channel("1:2").is_err());
    }
}

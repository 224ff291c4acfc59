use super::SweepResult;
use crate::error::Result;

/// One row per cell: swept values, `q*` for every pair in declaration
/// order, then the optimal labels of each state joined by `|`.
pub fn sweep_to_csv(result: &SweepResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = result.spec.axes.iter().map(|a| a.param.clone()).collect();
    for (s, actions) in result.states.iter().zip(&result.actions) {
        header.extend(actions.iter().map(|a| format!("q[{s},{a}]")));
    }
    header.extend(result.states.iter().map(|s| format!("optimal[{s}]")));
    w.write_record(&header)?;

    for cell in &result.cells {
        let mut row: Vec<String> = cell.params.iter().map(f64::to_string).collect();
        row.extend(cell.q.iter().flatten().map(f64::to_string));
        row.extend(cell.optimal.iter().map(|set| set.join("|")));
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

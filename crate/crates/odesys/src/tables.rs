//! CSV exports: comparison tables, curve plot data and DES event logs.

use odesys_core::baselines::ComparisonTable;
use odesys_core::cases::wind::des::{DesResult, VesselSpec};
use odesys_core::Problem;

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("csv output is UTF-8")
}

/// Columns: method, each variable, each objective, each criterion
/// preference, then the aggregated score.
pub fn comparison_csv(table: &ComparisonTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["method".to_string()];
    header.extend(table.variables.iter().cloned());
    header.extend(table.objectives.iter().cloned());
    header.extend(table.criteria.iter().map(|c| format!("P:{c}")));
    header.push("score".into());
    w.write_record(&header).expect("in-memory write");
    for row in &table.rows {
        let mut record = vec![row.method.to_string()];
        record.extend(row.x.iter().map(f64::to_string));
        record.extend(row.objectives.iter().map(f64::to_string));
        record.extend(row.preferences.iter().map(f64::to_string));
        record.push(row.score.to_string());
        w.write_record(&record).expect("in-memory write");
    }
    finish(w)
}

/// Long-format plot data: every curve knot (`series = knot`) plus one
/// marker per table row (`series = marker`) on each criterion.
pub fn plot_csv(problem: &Problem, table: &ComparisonTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["stakeholder", "objective", "series", "method", "value", "preference"]).expect("in-memory write");
    for (j, c) in problem.criteria().iter().enumerate() {
        let stakeholder = &problem.stakeholders()[c.stakeholder].name;
        let objective = &problem.objectives()[c.objective].name;
        for &(x, p) in c.curve.knots() {
            w.write_record([stakeholder, objective, "knot", "", &x.to_string(), &p.to_string()])
                .expect("in-memory write");
        }
        for row in &table.rows {
            w.write_record([
                stakeholder,
                objective,
                "marker",
                &row.method.to_string(),
                &row.objectives[c.objective].to_string(),
                &row.preferences[j].to_string(),
            ])
            .expect("in-memory write");
        }
    }
    finish(w)
}

/// Columns: time, vessel, event, anchors_remaining.
pub fn des_log_csv(result: &DesResult, specs: &[VesselSpec]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["time", "vessel", "event", "anchors_remaining"]).expect("in-memory write");
    for e in &result.log {
        w.write_record([
            e.time.to_string(),
            result.vessel_label(specs, e.vessel),
            e.kind.as_str().to_string(),
            e.anchors_remaining.to_string(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

//! Tables and figures: CSV round trip, shape and plotted points.

use bankcover::report::{build_table, reference, render_svg, TableArtifact, TableName, TableRow};
use bankcover::TruncationPolicy;

fn table(name: TableName) -> TableArtifact {
    build_table(name, &TruncationPolicy::default()).unwrap()
}

#[test]
fn csv_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    for name in TableName::ALL {
        let t = table(name);
        let path = dir.path().join(format!("{name}.csv"));
        t.write_csv(std::fs::File::create(&path).unwrap()).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(!text.contains('\r'));
        assert_eq!(TableArtifact::parse_csv(name, &text).unwrap(), t, "{name}");
    }
}

#[test]
fn parse_rejects_wrong_header() {
    let text = table(TableName::SdBounds).to_csv_string().unwrap();
    assert!(TableArtifact::parse_csv(TableName::EnQ, &text).is_err());
}

#[test]
fn expected_table_rounds_to_reference() {
    let t = table(TableName::EnQ);
    assert_eq!(t.rows.len(), 21);
    for row in &t.rows {
        let TableRow::Value { a, q, value_rounded, .. } = *row else { panic!("unexpected row") };
        let i = reference::TABLE_A.iter().position(|&x| x == a).unwrap();
        let j = reference::TABLE_Q.iter().position(|&x| x == q).unwrap();
        assert!((value_rounded - reference::EXPECTED_TESTS[i][j]).abs() < 1e-9, "a={a}, q={q}");
    }
}

#[test]
fn figure_series_increase_with_q() {
    for name in [TableName::FigLow, TableName::FigHigh] {
        let t = table(name);
        for a in reference::TABLE_A {
            let s = t.series(a);
            assert!(s.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1), "{name} a={a}");
        }
    }
}

#[test]
fn figure_matches_plotted_points() {
    let t = table(TableName::FigHigh);
    assert_eq!(t.rows.len(), 3 * reference::FIG_HIGH_Q.len());
    for a in reference::TABLE_A {
        for (q, v) in t.series(a) {
            let plotted = reference::figure_point(a, q).unwrap();
            assert!((v - plotted).abs() <= 0.05, "a={a}, q={q}: {v} vs {plotted}");
        }
    }
}

#[test]
fn svg_has_one_group_per_series() {
    let svg = render_svg(&table(TableName::FigLow));
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("class=\"series\"").count(), 3);
    assert_eq!(svg.matches("<circle").count(), 60);
}

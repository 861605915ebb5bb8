use proptest::prelude::*;

use hexloc::coverage::Rect;
use hexloc::experiments::gen_connected_network;
use hexloc::localizer::LocalizationParams;
use hexloc::protocol::{run_localization, write_event_log_csv, write_path_trace_csv, Network};
use hexloc::Point2D;

fn params(r: f64) -> LocalizationParams {
    LocalizationParams::with_divisor(r, 8).unwrap()
}

#[test]
fn chain_of_three_localizes() {
    let net = Network::new(
        &[
            Point2D::new(20.0, 25.0),
            Point2D::new(28.0, 25.0),
            Point2D::new(36.0, 25.0),
        ],
        10.0,
    )
    .unwrap();
    for seed in 0..5 {
        let res = run_localization(&net, &params(10.0), Point2D::ORIGIN, seed).unwrap();
        assert_eq!(res.localized_fraction(), 1.0);
        assert!(res.max_error().unwrap() < 5.0);
        assert!(res.lrh_count <= 3);
        assert_eq!(res.final_stack_len, 0);
    }
}

#[test]
fn event_log_tells_the_story() {
    let net = gen_connected_network(20, &Rect::square(50.0), 15.0, 9).unwrap();
    let res = run_localization(&net, &params(15.0), Point2D::ORIGIN, 9).unwrap();
    let localized = res.events.iter().filter(|e| e.event == "localized").count();
    assert_eq!(localized, net.len());
    assert_eq!(res.events.first().unwrap().event, "bootstrap_start");
    assert_eq!(res.events.last().unwrap().event, "done");
    let starts = res.events.iter().filter(|e| e.event == "lrh_start").count();
    assert_eq!(starts, res.lrh_count);

    let mut buf = Vec::new();
    write_event_log_csv(&res.events, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("time,actor,event,payload\n"));
    assert_eq!(text.lines().count(), res.events.len() + 1);

    let mut buf = Vec::new();
    write_path_trace_csv(&res.path_trace, &mut buf).unwrap();
    assert_eq!(
        String::from_utf8(buf).unwrap().lines().count(),
        res.path_trace.len() + 1
    );
}

#[test]
fn mismatched_range_is_rejected() {
    let net = Network::new(&[Point2D::new(1.0, 1.0)], 10.0).unwrap();
    assert!(run_localization(&net, &params(12.0), Point2D::ORIGIN, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_connected_network_is_localized(n in 1usize..30, r in 12.0f64..25.0, seed in 0u64..1000) {
        let net = gen_connected_network(n, &Rect::square(50.0), r, seed).unwrap();
        let res = run_localization(&net, &params(r), Point2D::ORIGIN, seed).unwrap();
        prop_assert_eq!(res.localized_fraction(), 1.0);
        prop_assert!(res.max_error().unwrap() < r / 2.0);
        prop_assert_eq!(res.final_stack_len, 0);
        prop_assert_eq!(res.anomalies, 0);
        let times: Vec<f64> = res.events.iter().map(|e| e.time).collect();
        prop_assert!(times.windows(2).all(|w| w[0] <= w[1]));
    }
}

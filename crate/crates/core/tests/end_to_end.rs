// SPDX-License-Identifier: MIT OR Apache-2.0

use std::io::BufReader;

use cusum_lp::dgp::{generate_series, ChangeSpec, NoiseModel};
use cusum_lp::limits::{
    CriticalValueTable, LimitSample, NullDistribution, DEFAULT_ALPHAS,
};
use cusum_lp::testing::{build_null, ChangePointTest, NullSettings, SigmaMode, StatisticSpec};
use cusum_lp::variance::{Demeaning, LrvConfig};
use cusum_lp::{Error, TimeSeries, WeightSpec};

fn settings() -> NullSettings {
    NullSettings {
        grid_size: 1024,
        replications: 5_000,
        ..NullSettings::default()
    }
}

#[test]
fn every_family_detects_a_large_shift_and_accepts_noise() {
    let specs = [
        StatisticSpec::General {
            p: 1.0,
            weight: WeightSpec::Power { q: 1.0 },
        },
        StatisticSpec::DarlingErdos {
            p: 2.0,
            kernel: Default::default(),
        },
        StatisticSpec::Renyi {
            p: 2.0,
            kappa: 2.5,
            t1: 0.05,
            t2: 0.95,
        },
    ];
    let noise = NoiseModel::Ar1 { rho: 0.3, s: 1.0 };
    let shifted = generate_series(&noise, &ChangeSpec::at(300, 1.5), 600, 8).unwrap();
    let sigma = SigmaMode::Estimate(LrvConfig {
        demeaning: Demeaning::SplitHalf,
        ..LrvConfig::default()
    });
    for spec in specs {
        let (null, _) = build_null(&spec, &settings(), 1).unwrap();
        let test = ChangePointTest::new(spec, 600).unwrap();
        let out = test.run(&shifted, &sigma, &null, 0.05).unwrap();
        assert!(out.reject, "{spec:?}: {out:?}");

        let mut rejections = 0;
        for seed in 0..40 {
            let clean = generate_series(&noise, &ChangeSpec::none(), 600, 100 + seed).unwrap();
            rejections += test.run(&clean, &sigma, &null, 0.05).unwrap().reject as usize;
        }
        assert!(rejections <= 8, "{spec:?}: {rejections}/40 null rejections");
    }
}

#[test]
fn tables_and_samples_round_trip_through_text() {
    let spec = StatisticSpec::General {
        p: 2.0,
        weight: WeightSpec::Uniform,
    };
    let (null, meta) = build_null(&spec, &settings(), 9).unwrap();
    let NullDistribution::Simulated(sample) = &null else {
        panic!("simulated null expected")
    };
    let mut buf = Vec::new();
    sample.write_to(&mut buf).unwrap();
    let back = LimitSample::read_from(BufReader::new(&buf[..])).unwrap();
    assert_eq!(&back, sample);

    let table = CriticalValueTable::from_null(&null, meta, &DEFAULT_ALPHAS).unwrap();
    let mut buf = Vec::new();
    table.write_to(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("# {"));
    let back = CriticalValueTable::read_from(BufReader::new(&buf[..])).unwrap();
    assert_eq!(back, table);
    for pair in table.rows.windows(2) {
        assert!(pair[1].critical_value > pair[0].critical_value);
    }
}

#[test]
fn short_series_are_rejected_up_front() {
    assert!(matches!(
        TimeSeries::new(vec![1.0]),
        Err(Error::InsufficientData { needed: 2, got: 1 })
    ));
    let spec = StatisticSpec::General {
        p: 2.0,
        weight: WeightSpec::Uniform,
    };
    let (null, _) = build_null(&spec, &settings(), 2).unwrap();
    let test = ChangePointTest::new(spec, 3).unwrap();
    let s = TimeSeries::new(vec![1.0, 5.0, 2.0]).unwrap();
    assert!(matches!(
        test.run(&s, &SigmaMode::default(), &null, 0.05),
        Err(Error::InsufficientData { needed: 4, got: 3 })
    ));
    assert!(test.run(&s, &SigmaMode::Fixed(1.0), &null, 0.05).is_ok());
}

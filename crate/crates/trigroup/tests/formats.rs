use proptest::prelude::*;
use trigroup::format::{parse_json, parse_presentation, parse_text, to_json, to_text};
use trigroup_core::{sample_presentation, SampleConfig};

proptest! {
    #[test]
    fn text_and_json_round_trip(n in 1u32..=6, p in 0.0f64..0.3, seed in any::<u64>()) {
        let pres = sample_presentation(&SampleConfig::new(n, p, seed));
        let text = to_text(&pres);
        prop_assert_eq!(&parse_text(&text).unwrap(), &pres);
        prop_assert_eq!(to_text(&parse_presentation(&text).unwrap()), text);
        let json = to_json(&pres);
        prop_assert_eq!(&parse_json(&json).unwrap(), &pres);
        prop_assert_eq!(to_json(&parse_presentation(&json).unwrap()), json);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored(n in 1u32..=4, seed in any::<u64>()) {
        let pres = sample_presentation(&SampleConfig::new(n, 0.1, seed));
        let noisy: String = to_text(&pres)
            .lines()
            .flat_map(|l| [l.to_string(), "# note".to_string(), String::new()])
            .collect::<Vec<_>>()
            .join("\n");
        prop_assert_eq!(parse_text(&noisy).unwrap(), pres);
    }
}

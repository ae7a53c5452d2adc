mod common;

use common::DATE_CASES;
use metakg_core::extract::extract_dates;

#[test]
fn downloaded_on_example() {
    let found = extract_dates("The file was downloaded on 31st March 2020.", "D1");
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].normalized, "2020-03-31");
    assert_eq!(found[0].surface, "31st March 2020");
}

#[test]
fn thirty_case_table() {
    for (text, expected) in DATE_CASES {
        let got: Vec<String> = extract_dates(text, "T").into_iter().map(|e| e.normalized).collect();
        assert_eq!(got, expected, "input {text:?}");
    }
}

#[test]
fn spans_are_character_offsets() {
    let text = "café 2020-03-31";
    let found = extract_dates(text, "T");
    assert_eq!(found[0].span, (5, 15));
    let chars: String = text.chars().skip(5).take(10).collect();
    assert_eq!(chars, "2020-03-31");
}

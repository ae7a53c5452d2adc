use serde::{Deserialize, Serialize};

use super::IngestError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Horizontal,
    Vertical,
}

/// One positioned text run as emitted by a PDF text extractor. Coordinates
/// are in points with y growing upwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutSegment {
    pub text: String,
    pub page: u32,
    pub bbox: [f64; 4],
    pub font_name: String,
    pub font_size: f64,
    #[serde(default)]
    pub direction: Direction,
}

impl LayoutSegment {
    fn check(&self) -> Result<(), String> {
        let [x0, y0, x1, y1] = self.bbox;
        if self.page == 0 {
            return Err("page must be positive".into());
        }
        if !self.bbox.iter().all(|v| v.is_finite()) || x0 > x1 || y0 > y1 {
            return Err(format!("malformed bbox {:?}", self.bbox));
        }
        if !(self.font_size.is_finite() && self.font_size > 0.0) {
            return Err(format!("font_size must be positive, got {}", self.font_size));
        }
        Ok(())
    }

    fn height(&self) -> f64 {
        self.bbox[3] - self.bbox[1]
    }
}

/// Parses JSON Lines, one segment per non-blank line, checking the schema.
pub fn parse_segments(text: &str) -> Result<Vec<LayoutSegment>, IngestError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let seg: LayoutSegment =
            serde_json::from_str(line).map_err(|e| IngestError::Segment { line: i + 1, message: e.to_string() })?;
        seg.check().map_err(|message| IngestError::Segment { line: i + 1, message })?;
        out.push(seg);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayoutConfig {
    /// Minimum vertical overlap, as a fraction of the smaller height, to share a line.
    pub line_overlap: f64,
    /// Gaps below this multiple of the page's median line height continue a paragraph.
    pub paragraph_gap: f64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig { line_overlap: 0.5, paragraph_gap: 0.8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub text: String,
    pub page: u32,
    pub y0: f64,
    pub y1: f64,
    pub font_size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Paragraph {
    pub page: u32,
    pub lines: Vec<Line>,
}

impl Paragraph {
    /// Lines joined by spaces, rejoining words hyphenated across a line break.
    pub fn text(&self) -> String {
        join_lines(self.lines.iter().map(|l| l.text.as_str()))
    }
}

pub(crate) fn join_lines<'a>(lines: impl Iterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if out.is_empty() {
            out.push_str(line);
            continue;
        }
        let mut tail = out.chars().rev();
        let hyphenated = tail.next() == Some('-')
            && tail.next().is_some_and(char::is_alphabetic)
            && line.chars().next().is_some_and(char::is_alphabetic);
        if hyphenated {
            out.pop();
        } else {
            out.push(' ');
        }
        out.push_str(line);
    }
    out
}

fn overlaps(line: &Line, seg: &LayoutSegment, ratio: f64) -> bool {
    let overlap = line.y1.min(seg.bbox[3]) - line.y0.max(seg.bbox[1]);
    let smaller = (line.y1 - line.y0).min(seg.height());
    if smaller <= 0.0 {
        return overlap >= 0.0;
    }
    overlap >= ratio * smaller
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Groups segments (already in reading order) into lines and lines into
/// paragraphs. Vertical segments are dropped.
pub fn reconstruct_text(segments: &[LayoutSegment], config: &LayoutConfig) -> Vec<Paragraph> {
    let mut lines: Vec<Line> = Vec::new();
    for seg in segments.iter().filter(|s| s.direction == Direction::Horizontal) {
        let text = seg.text.trim();
        if text.is_empty() {
            continue;
        }
        match lines.last_mut() {
            Some(line) if line.page == seg.page && overlaps(line, seg, config.line_overlap) => {
                line.text.push(' ');
                line.text.push_str(text);
                line.y0 = line.y0.min(seg.bbox[1]);
                line.y1 = line.y1.max(seg.bbox[3]);
                line.font_size = line.font_size.max(seg.font_size);
            }
            _ => lines.push(Line {
                text: text.to_string(),
                page: seg.page,
                y0: seg.bbox[1],
                y1: seg.bbox[3],
                font_size: seg.font_size,
            }),
        }
    }

    let mut paragraphs: Vec<Paragraph> = Vec::new();
    let mut start = 0;
    while start < lines.len() {
        let page = lines[start].page;
        let end = start + lines[start..].iter().take_while(|l| l.page == page).count();
        let mut heights: Vec<f64> = lines[start..end].iter().map(|l| l.y1 - l.y0).collect();
        let threshold = config.paragraph_gap * median(&mut heights);
        let mut current: Vec<Line> = Vec::new();
        for line in &lines[start..end] {
            if let Some(prev) = current.last() {
                let gap = prev.y0 - line.y1;
                if gap >= threshold {
                    paragraphs.push(Paragraph { page, lines: std::mem::take(&mut current) });
                }
            }
            current.push(line.clone());
        }
        if !current.is_empty() {
            paragraphs.push(Paragraph { page, lines: current });
        }
        start = end;
    }
    paragraphs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(text: &str, page: u32, x0: f64, y0: f64, height: f64) -> LayoutSegment {
        LayoutSegment {
            text: text.into(),
            page,
            bbox: [x0, y0, x0 + 50.0, y0 + height],
            font_name: "Helvetica".into(),
            font_size: height,
            direction: Direction::Horizontal,
        }
    }

    #[test]
    fn same_visual_line_space_joined() {
        let paras = reconstruct_text(
            &[seg("Leeftijd bij", 1, 10.0, 700.0, 10.0), seg("overlijden", 1, 70.0, 701.0, 10.0)],
            &LayoutConfig::default(),
        );
        assert_eq!(paras.len(), 1);
        assert_eq!(paras[0].lines.len(), 1);
        assert_eq!(paras[0].text(), "Leeftijd bij overlijden");
    }

    #[test]
    fn hyphenation_rejoined() {
        // gap of 2 points against a 10 point median stays within the paragraph
        let paras = reconstruct_text(
            &[seg("datum van overlij-", 1, 10.0, 700.0, 10.0), seg("den", 1, 10.0, 688.0, 10.0)],
            &LayoutConfig::default(),
        );
        assert_eq!(paras.len(), 1);
        assert_eq!(paras[0].text(), "datum van overlijden");
        assert_eq!(join_lines(["2015-", "2019"].into_iter()), "2015- 2019");
    }

    #[test]
    fn large_gap_breaks_paragraph() {
        let paras = reconstruct_text(
            &[seg("first", 1, 10.0, 700.0, 10.0), seg("second", 1, 10.0, 660.0, 10.0)],
            &LayoutConfig::default(),
        );
        assert_eq!(paras.len(), 2);
    }

    #[test]
    fn page_change_breaks_and_vertical_dropped() {
        let mut v = seg("margin note", 1, 0.0, 100.0, 10.0);
        v.direction = Direction::Vertical;
        let paras = reconstruct_text(
            &[seg("a", 1, 10.0, 700.0, 10.0), v, seg("b", 2, 10.0, 800.0, 10.0)],
            &LayoutConfig::default(),
        );
        let texts: Vec<_> = paras.iter().map(Paragraph::text).collect();
        assert_eq!(texts, vec!["a", "b"]);
    }

    #[test]
    fn empty_input() {
        assert!(reconstruct_text(&[], &LayoutConfig::default()).is_empty());
    }

    #[test]
    fn schema_violations_reported_with_line() {
        let good = r#"{"text":"x","page":1,"bbox":[0,0,1,1],"font_name":"F","font_size":9}"#;
        let bad = r#"{"text":"x","page":1,"bbox":[5,0,1,1],"font_name":"F","font_size":9}"#;
        assert_eq!(parse_segments(good).unwrap().len(), 1);
        match parse_segments(&format!("{good}\n{bad}\n")) {
            Err(IngestError::Segment { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_segments("{not json").is_err());
    }
}

//! CSV trial logs: one file of frames per trial and one summary per batch.

use std::io::{Read, Write};

use super::batch::TrialSummary;
use super::trial::Frame;
use crate::error::Result;

/// Columns: `t,phys_x,phys_z,virtual_dist,deg,attention,gain`.
pub fn write_frames<W: Write>(writer: W, frames: &[Frame]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if frames.is_empty() {
        w.write_record([
            "t",
            "phys_x",
            "phys_z",
            "virtual_dist",
            "deg",
            "attention",
            "gain",
        ])?;
    }
    for f in frames {
        w.serialize(f)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: `trial_id,group,target_gain,t1,max_gain_reached,physical_distance,response`.
/// `t1` and `response` are empty when absent.
pub fn write_summary<W: Write>(writer: W, rows: &[TrialSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if rows.is_empty() {
        w.write_record([
            "trial_id",
            "group",
            "target_gain",
            "t1",
            "max_gain_reached",
            "physical_distance",
            "response",
        ])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_summary<R: Read>(reader: R) -> Result<Vec<TrialSummary>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    Ok(rdr
        .deserialize()
        .collect::<Result<Vec<TrialSummary>, csv::Error>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{Group, Response};

    #[test]
    fn summary_round_trip() {
        let rows = vec![
            TrialSummary {
                trial_id: 0,
                group: Group::WithDistractor,
                target_gain: 1.3,
                t1: Some(0.0556),
                max_gain_reached: true,
                physical_distance: 7.9,
                response: Some(Response::Greater),
            },
            TrialSummary {
                trial_id: 1,
                group: Group::WithDistractor,
                target_gain: 0.6,
                t1: None,
                max_gain_reached: false,
                physical_distance: 8.0,
                response: None,
            },
        ];
        let mut buf = Vec::new();
        write_summary(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "trial_id,group,target_gain,t1,max_gain_reached,physical_distance,response\n"
        ));
        assert!(text.contains("1,with_distractor,0.6,,false,8.0,\n"));
        assert_eq!(read_summary(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn frame_header() {
        let mut buf = Vec::new();
        write_frames(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "t,phys_x,phys_z,virtual_dist,deg,attention,gain\n"
        );
    }
}

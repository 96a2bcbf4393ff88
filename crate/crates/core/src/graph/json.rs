//! JSON document for a port graph plus fixed schedule.
//!
//! ```json
//! {"n":3,"edges":[{"u":0,"v":1,"pu":1,"pv":1}],"absent":[{"edge":0,"from":2,"to":4}],
//!  "claimed_T":null,"horizon":10}
//! ```
//!
//! `horizon` is the number of realized steps covered by the document. When it
//! is missing it defaults to one past the last absence (at least `claimed_T`).
//! Adversary dumps additionally carry `forbidden` and `guaranteed_steps`.

use serde::{Deserialize, Serialize};

use super::{Edge, EdgeId, FixedSchedule, GraphError, Interval, NodeId, PortGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: usize,
    pub v: usize,
    pub pu: usize,
    pub pv: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsenceRecord {
    pub edge: usize,
    pub from: u64,
    pub to: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDoc {
    pub n: usize,
    pub edges: Vec<EdgeRecord>,
    pub absent: Vec<AbsenceRecord>,
    #[serde(rename = "claimed_T")]
    pub claimed_t: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forbidden: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guaranteed_steps: Option<u64>,
}

impl ScheduleDoc {
    pub fn from_schedule(s: &FixedSchedule) -> Self {
        ScheduleDoc {
            n: s.graph().n(),
            edges: s
                .graph()
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    u: e.u.0,
                    v: e.v.0,
                    pu: e.port_u,
                    pv: e.port_v,
                })
                .collect(),
            absent: s
                .all_absences()
                .map(|(e, iv)| AbsenceRecord {
                    edge: e.0,
                    from: iv.from,
                    to: iv.to,
                })
                .collect(),
            claimed_t: s.claimed_t(),
            horizon: Some(s.horizon()),
            forbidden: None,
            guaranteed_steps: None,
        }
    }

    pub fn to_schedule(&self) -> Result<FixedSchedule, GraphError> {
        let edges = self
            .edges
            .iter()
            .map(|r| Edge {
                u: NodeId(r.u),
                v: NodeId(r.v),
                port_u: r.pu,
                port_v: r.pv,
            })
            .collect();
        let graph = PortGraph::with_ports(self.n, edges)?;
        let horizon = self.horizon.unwrap_or_else(|| {
            let last = self.absent.iter().map(|a| a.to + 1).max().unwrap_or(1);
            last.max(self.claimed_t.unwrap_or(0))
        });
        let absences = self.absent.iter().map(|a| {
            (
                EdgeId(a.edge),
                Interval {
                    from: a.from,
                    to: a.to,
                },
            )
        });
        FixedSchedule::new(graph, absences, horizon, self.claimed_t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("schedule documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_document() {
        let text = r#"{"n":3,"edges":[{"u":0,"v":1,"pu":1,"pv":1},{"u":1,"v":2,"pu":2,"pv":1},{"u":2,"v":0,"pu":2,"pv":2}],"absent":[{"edge":0,"from":2,"to":4}],"claimed_T":null}"#;
        let doc = ScheduleDoc::from_json(text).unwrap();
        let s = doc.to_schedule().unwrap();
        assert_eq!(s.horizon(), 5);
        assert!(!s.is_present(EdgeId(0), 3));
        assert_eq!(doc.horizon, None);
    }

    #[test]
    fn truncated_document_is_an_error() {
        let err = ScheduleDoc::from_json(r#"{"n":3,"edges":[{"u":0,"v""#).unwrap_err();
        assert!(err.is_eof());
        assert_eq!(err.line(), 1);
    }

    #[test]
    fn rejects_bad_ports() {
        let text = r#"{"n":2,"edges":[{"u":0,"v":1,"pu":2,"pv":1}],"absent":[],"claimed_T":3}"#;
        let doc = ScheduleDoc::from_json(text).unwrap();
        assert!(matches!(doc.to_schedule(), Err(GraphError::BadPort { .. })));
    }
}

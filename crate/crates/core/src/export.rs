//! File formats: graph JSON and edge lists, code tables, demand files.
//!
//! Probabilities and positions are written as exact decimals of their
//! fixed-point values, so a graph file can be rebuilt bit for bit.

use std::path::Path;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coding::CodeTable;
use crate::decimal::{binary_expansion, dyadic_to_decimal, dyadic_to_rounded_decimal, parse_decimal_floor};
use crate::demand::{product_demand, random_permutation, zipf, DemandMatrix, Distribution, MASS_BITS};
use crate::error::{Error, Result, Side};
use crate::point::{UnitPoint, FRACTION_BITS};
use crate::topology::{EdgeKind, Network};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: usize,
    pub p: String,
    pub cw: String,
    pub x: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub src: usize,
    pub dst: usize,
    #[serde(rename = "type")]
    pub kind: EdgeKind,
}

/// Graph export. Node ids are zero based; edges are sorted by
/// `(src, dst, type)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub shift: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub build_side: Option<Side>,
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
}

impl GraphFile {
    pub fn from_network(net: &Network, build_side: Option<Side>) -> Self {
        let pl = &net.placement;
        let nodes = (0..pl.n())
            .map(|i| NodeRecord {
                id: i,
                p: dyadic_to_decimal(pl.prob(i).mass(), MASS_BITS),
                cw: pl.code_table().codeword(i).to_string(),
                x: dyadic_to_decimal(pl.points()[i].bits(), FRACTION_BITS),
            })
            .collect();
        let edges = net.graph.edges().iter().map(|e| EdgeRecord { src: e.src, dst: e.dst, kind: e.kind }).collect();
        GraphFile { shift: dyadic_to_decimal(pl.shift().bits(), FRACTION_BITS), build_side, nodes, edges }
    }

    /// Rebuilds the network from `p` and `shift`, then checks that codewords,
    /// positions and edges agree with the file.
    pub fn to_network(&self) -> Result<Network> {
        let bad = |m: String| Error::InconsistentNetwork(m);
        let shift = parse_decimal_floor(&self.shift, FRACTION_BITS)?
            .to_u128()
            .ok_or_else(|| bad(format!("shift {} is not below one", self.shift)))?;
        let mut masses = Vec::with_capacity(self.nodes.len());
        for (k, node) in self.nodes.iter().enumerate() {
            if node.id != k {
                return Err(bad(format!("node {k} has id {}", node.id)));
            }
            let m = parse_decimal_floor(&node.p, MASS_BITS)?
                .to_u128()
                .ok_or_else(|| bad(format!("p of node {k} is too large")))?;
            masses.push(m);
        }
        let p = Distribution::from_masses(masses).map_err(|e| bad(e.to_string()))?;
        let net = Network::build(&p, UnitPoint::from_bits(shift))?;
        let rebuilt = GraphFile::from_network(&net, self.build_side);
        for (a, b) in self.nodes.iter().zip(&rebuilt.nodes) {
            if a.cw != b.cw {
                return Err(bad(format!("node {}: codeword {} but p and shift give {}", a.id, a.cw, b.cw)));
            }
            let x = parse_decimal_floor(&a.x, FRACTION_BITS)?;
            if x != BigUint::from(net.placement.points()[a.id].bits()) {
                return Err(bad(format!("node {}: position {} but p and shift give {}", a.id, a.x, b.x)));
            }
        }
        let mut edges = self.edges.clone();
        edges.sort_by_key(|e| (e.src, e.dst, e.kind));
        if edges != rebuilt.edges {
            return Err(bad("edge list differs from the one p and shift produce".into()));
        }
        Ok(net)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph files serialize")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// `src,dst,type` per edge, same order as the graph file.
pub fn edge_list_csv(net: &Network) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["src", "dst", "type"]).expect("in memory");
    for e in net.graph.edges() {
        let kind = match e.kind {
            EdgeKind::Left => "left",
            EdgeKind::Right => "right",
            EdgeKind::Ring => "ring",
        };
        w.write_record([e.src.to_string(), e.dst.to_string(), kind.to_owned()]).expect("in memory");
    }
    String::from_utf8(w.into_inner().expect("in memory")).expect("utf-8")
}

/// Decimal places for the real-valued columns of a code table.
pub const CODE_TABLE_PLACES: u32 = 10;

/// `i,p_i,F_i,Fbar_i,Fbar_i_binary,l_i,cw_i,x_i`, one row per node with `i`
/// starting at 1.
pub fn code_table_csv(table: &CodeTable) -> String {
    let dec = |v: u128, bits: u32| dyadic_to_rounded_decimal(&BigUint::from(v), bits, CODE_TABLE_PLACES);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["i", "p_i", "F_i", "Fbar_i", "Fbar_i_binary", "l_i", "cw_i", "x_i"]).expect("in memory");
    let mut before = 0u128;
    for (k, e) in table.entries().iter().enumerate() {
        let x = table.shift().wrapping_add(UnitPoint::from_bits(before << 1));
        w.write_record([
            (k + 1).to_string(),
            dec(e.prob.mass(), MASS_BITS),
            dec(e.cdf.mass(), MASS_BITS),
            dec(e.midpoint.bits(), FRACTION_BITS),
            binary_expansion(e.midpoint.bits(), CODE_TABLE_PLACES),
            e.length.to_string(),
            e.codeword.to_string(),
            dec(x.bits(), FRACTION_BITS),
        ])
        .expect("in memory");
        before = e.cdf.mass();
    }
    String::from_utf8(w.into_inner().expect("in memory")).expect("utf-8")
}

/// A decimal given either as a string or as a JSON number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DecimalValue {
    Text(String),
    Number(serde_json::Number),
}

impl DecimalValue {
    fn text(&self) -> String {
        match self {
            DecimalValue::Text(s) => s.clone(),
            DecimalValue::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZipfSpec {
    pub n: usize,
    pub s_source: f64,
    pub s_dest: f64,
    /// Seeds the two independent node permutations; none keeps Zipf order.
    #[serde(default)]
    pub perm_seed: Option<u64>,
}

/// Demand file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum DemandFile {
    Matrix(Vec<Vec<DecimalValue>>),
    Zipf(ZipfSpec),
    /// `R = p_s p_dᵀ` from explicit marginals.
    Product { p_s: Vec<DecimalValue>, p_d: Vec<DecimalValue> },
}

impl DemandFile {
    pub fn parse(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_demand(&self) -> Result<DemandMatrix> {
        match self {
            DemandFile::Matrix(rows) => {
                let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(DecimalValue::text).collect()).collect();
                DemandMatrix::from_decimal_rows(&rows)
            }
            DemandFile::Zipf(z) => {
                let (mut ps, mut pd) = (zipf(z.n, z.s_source)?, zipf(z.n, z.s_dest)?);
                if let Some(seed) = z.perm_seed {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    ps = ps.permuted(&random_permutation(z.n, &mut rng))?;
                    pd = pd.permuted(&random_permutation(z.n, &mut rng))?;
                }
                product_demand(&ps, &pd)
            }
            DemandFile::Product { p_s, p_d } => {
                let t = |v: &[DecimalValue]| v.iter().map(DecimalValue::text).collect::<Vec<_>>();
                product_demand(&Distribution::from_decimals(&t(p_s))?, &Distribution::from_decimals(&t(p_d))?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demand::select_build_distribution;

    fn example6() -> Distribution {
        Distribution::from_decimals(&["0.1", "0.15", "0.2", "0.25", "0.1", "0.2"]).unwrap()
    }

    const EXAMPLE6_CSV: &str = "\
i,p_i,F_i,Fbar_i,Fbar_i_binary,l_i,cw_i,x_i
1,0.1,0.1,0.05,0.0000110011,5,00001,0.0
2,0.15,0.25,0.175,0.0010110011,4,0010,0.1
3,0.2,0.45,0.35,0.0101100110,4,0101,0.25
4,0.25,0.7,0.575,0.1001001100,3,100,0.45
5,0.1,0.8,0.75,0.1100000000,5,11000,0.7
6,0.2,1.0,0.9,0.1110011001,4,1110,0.8
";

    #[test]
    fn example6_code_table_csv() {
        let t = CodeTable::build(&example6(), UnitPoint::ZERO);
        assert_eq!(code_table_csv(&t), EXAMPLE6_CSV);
    }

    #[test]
    fn graph_file_roundtrip() {
        let net = Network::build(&example6(), UnitPoint::from_f64(0.3)).unwrap();
        let f = GraphFile::from_network(&net, Some(Side::Source));
        let back: GraphFile = serde_json::from_str(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let rebuilt = back.to_network().unwrap();
        assert_eq!(rebuilt.graph.edges(), net.graph.edges());
        assert_eq!(rebuilt.placement.points(), net.placement.points());
    }

    #[test]
    fn tampered_graph_file_is_rejected() {
        let net = Network::build(&example6(), UnitPoint::ZERO).unwrap();
        let good = GraphFile::from_network(&net, None);
        let mut f = good.clone();
        f.nodes[2].cw = "0100".into();
        assert!(matches!(f.to_network(), Err(Error::InconsistentNetwork(_))));
        let mut f = good.clone();
        f.edges.pop();
        assert!(matches!(f.to_network(), Err(Error::InconsistentNetwork(_))));
        let mut f = good;
        f.nodes[0].x = "0.5".into();
        assert!(matches!(f.to_network(), Err(Error::InconsistentNetwork(_))));
    }

    #[test]
    fn example6_graph_json_shape() {
        let net = Network::build(&example6(), UnitPoint::ZERO).unwrap();
        let v: serde_json::Value = serde_json::from_str(&GraphFile::from_network(&net, None).to_json()).unwrap();
        assert_eq!(v["shift"], "0");
        assert_eq!(v["nodes"][3]["cw"], "100");
        assert_eq!(v["nodes"][0]["x"], "0");
        assert!(v["edges"].as_array().unwrap().iter().any(|e| e["src"] == 0 && e["dst"] == 3 && e["type"] == "right"));
        let csv = edge_list_csv(&net);
        assert!(csv.starts_with("src,dst,type\n"));
        assert_eq!(csv.lines().count(), net.graph.edges().len() + 1);
    }

    #[test]
    fn demand_files() {
        let m = DemandFile::parse(r#"{"matrix": [["0.25", 0.25], ["0.5", "0"]]}"#).unwrap().to_demand().unwrap();
        let (ps, pd) = m.marginals().unwrap();
        assert_eq!(ps.to_f64_vec(), vec![0.5, 0.5]);
        assert_eq!(pd.to_f64_vec(), vec![0.75, 0.25]);

        let z = DemandFile::parse(r#"{"zipf": {"n": 50, "s_source": 1.0, "s_dest": 0.5, "perm_seed": 4}}"#).unwrap();
        let r = z.to_demand().unwrap();
        assert_eq!(r, z.to_demand().unwrap());
        let (ps, pd) = r.marginals().unwrap();
        assert!(ps.same_multiset(&zipf(50, 1.0).unwrap()));
        assert_eq!(select_build_distribution(&ps, &pd).1, Side::Source);

        let p = DemandFile::parse(r#"{"product": {"p_s": ["0.5", "0.5"], "p_d": [0.9, 0.1]}}"#).unwrap();
        assert_eq!(p.to_demand().unwrap().entry_real::<f64>(0, 1), 0.05);

        assert!(DemandFile::parse(r#"{"matrix": [["0.5"]], "zipf": {}}"#).is_err());
        assert!(DemandFile::parse(r#"{"matrix": [["x", "0"], ["0", "0"]]}"#).unwrap().to_demand().is_err());
    }
}

use super::network::NetworkModel;

/// Small dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i8>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i8 {
        self.data[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: i8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = i8> + '_ {
        (0..self.rows).map(move |r| self.get(r, c))
    }

    pub fn row(&self, r: usize) -> &[i8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|v| **v != 0).count()
    }
}

/// Bus-line incidence `A` plus the element-to-bus adjacency matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceSet {
    /// B x L, +1 at the sending bus and -1 at the receiving bus.
    pub a: IntMatrix,
    pub a_line: IntMatrix,
    pub a_load: IntMatrix,
    pub a_gen: IntMatrix,
    pub a_ess: IntMatrix,
}

pub fn build_incidence(net: &NetworkModel) -> IncidenceSet {
    let nb = net.buses.len();
    let pos = |id: u32| net.bus_index(id).expect("validated network");

    let mut a = IntMatrix::zeros(nb, net.lines.len());
    let mut a_line = IntMatrix::zeros(nb, net.lines.len());
    for (j, l) in net.lines.iter().enumerate() {
        a.set(pos(l.from), j, 1);
        a.set(pos(l.to), j, -1);
        a_line.set(pos(l.from), j, 1);
        a_line.set(pos(l.to), j, 1);
    }
    let adjacency = |buses: Vec<u32>| {
        let mut m = IntMatrix::zeros(nb, buses.len());
        for (j, b) in buses.into_iter().enumerate() {
            m.set(pos(b), j, 1);
        }
        m
    };
    IncidenceSet {
        a,
        a_line,
        a_load: adjacency(net.loads.iter().map(|l| l.bus).collect()),
        a_gen: adjacency(net.generators.iter().map(|g| g.bus).collect()),
        a_ess: adjacency(net.ess.iter().map(|s| s.bus).collect()),
    }
}

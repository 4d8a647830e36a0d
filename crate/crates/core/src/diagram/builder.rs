use super::{PlanarDiagram, Slot};
use crate::error::{Error, Result};

/// Which pair of opposite slots carries the under-strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Axis {
    /// Slots 0 and 2.
    Even,
    /// Slots 1 and 3.
    Odd,
}

#[derive(Clone, Copy, Debug)]
enum Under {
    Fixed(Axis),
    /// Over/under chosen after orientation so the crossing gets this sign.
    Signed(i8),
}

/// Assembles a diagram from crossings whose four slots are numbered
/// counterclockwise and wired together pairwise. Arc labels, the
/// orientation and the PD rotation of each tuple are derived in `build`.
#[derive(Default)]
pub(crate) struct DiagramBuilder {
    under: Vec<Under>,
    link: Vec<[Option<Slot>; 4]>,
}

impl DiagramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn crossing(&mut self, axis: Axis) -> usize {
        self.under.push(Under::Fixed(axis));
        self.link.push([None; 4]);
        self.under.len() - 1
    }

    pub fn signed_crossing(&mut self, sign: i8) -> usize {
        self.under.push(Under::Signed(sign));
        self.link.push([None; 4]);
        self.under.len() - 1
    }

    pub fn connect(&mut self, a: Slot, b: Slot) {
        assert!(
            self.link[a.0][a.1].is_none() && self.link[b.0][b.1].is_none(),
            "slot wired twice"
        );
        assert!(a != b, "slot wired to itself");
        self.link[a.0][a.1] = Some(b);
        self.link[b.0][b.1] = Some(a);
    }

    pub fn build(&self) -> Result<PlanarDiagram> {
        let n = self.under.len();
        if n == 0 {
            return Ok(PlanarDiagram::unknot());
        }
        let link = |s: Slot| -> Result<Slot> {
            self.link[s.0][s.1].ok_or_else(|| {
                Error::InternalInvariantViolation(format!("slot {s:?} left unwired"))
            })
        };
        let mut labels = vec![[0u32; 4]; n];
        let mut entered = vec![[false; 4]; n];

        let start: Slot = (0, 0);
        let back = link(start)?;
        labels[0][0] = 1;
        labels[back.0][back.1] = 1;
        let mut next = 2u32;
        let mut cur = start;
        let mut steps = 0usize;
        loop {
            entered[cur.0][cur.1] = true;
            steps += 1;
            let exit = (cur.0, (cur.1 + 2) % 4);
            if labels[exit.0][exit.1] != 0 {
                break;
            }
            let to = link(exit)?;
            labels[exit.0][exit.1] = next;
            labels[to.0][to.1] = next;
            next += 1;
            cur = to;
            if steps > 2 * n {
                break;
            }
        }
        if steps != 2 * n {
            return Err(Error::MultiComponent {
                visited: 2 * steps,
                total: 4 * n,
            });
        }

        let tuples: Vec<[u32; 4]> = (0..n)
            .map(|c| {
                let even_in = if entered[c][0] { 0 } else { 2 };
                let odd_in = if entered[c][1] { 1 } else { 3 };
                let under_in = match self.under[c] {
                    Under::Fixed(Axis::Even) => even_in,
                    Under::Fixed(Axis::Odd) => odd_in,
                    Under::Signed(s) => {
                        let even_under_sign = if odd_in == (even_in + 3) % 4 { 1 } else { -1 };
                        if even_under_sign == s {
                            even_in
                        } else {
                            odd_in
                        }
                    }
                };
                std::array::from_fn(|i| labels[c][(under_in + i) % 4])
            })
            .collect();
        PlanarDiagram::from_tuples(&tuples)
    }
}

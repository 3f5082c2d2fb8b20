use std::fmt;

/// The five independent variables of the jet space, in atom order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    S,
    T,
    X,
    Y,
    Z,
}

impl Coord {
    pub const ALL: [Coord; 5] = [Coord::S, Coord::T, Coord::X, Coord::Y, Coord::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        ['s', 't', 'x', 'y', 'z'][self.index()]
    }

    /// The spacetime direction, `None` for the affine parameter.
    pub fn spacetime(self) -> Option<Dir> {
        match self {
            Coord::S => None,
            Coord::T => Some(Dir::T),
            Coord::X => Some(Dir::X),
            Coord::Y => Some(Dir::Y),
            Coord::Z => Some(Dir::Z),
        }
    }
}

/// Spacetime direction: indexes coordinates, velocities and accelerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    T,
    X,
    Y,
    Z,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::T, Dir::X, Dir::Y, Dir::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn coord(self) -> Coord {
        Coord::ALL[self.index() + 1]
    }

    pub fn letter(self) -> char {
        self.coord().letter()
    }
}

/// Metric functions of `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    A,
    B,
    C,
}

impl Func {
    pub const ALL: [Func; 3] = [Func::A, Func::B, Func::C];

    pub fn letter(self) -> char {
        ['A', 'B', 'C'][self as usize]
    }
}

/// Free parameters: `a1..a9` (the component-solution constants), `a`, `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Alpha(u8),
    LowerA,
    LowerB,
}

/// Unknown coefficient functions of a symmetry generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unknown {
    Mu,
    Tau,
    Xi,
    Eta,
    Phi,
    Gauge,
}

impl Unknown {
    pub const ALL: [Unknown; 6] = [
        Unknown::Mu,
        Unknown::Tau,
        Unknown::Xi,
        Unknown::Eta,
        Unknown::Phi,
        Unknown::Gauge,
    ];

    pub fn name(self) -> &'static str {
        ["mu", "tau", "xi", "eta", "phi", "f"][self as usize]
    }

    pub fn from_name(name: &str) -> Option<Unknown> {
        Unknown::ALL.into_iter().find(|u| u.name() == name)
    }
}

/// An indivisible symbol. The derived ordering is the fixed atom order used
/// by the canonical form: coordinates, velocities, accelerations, metric
/// functions (by derivative order), parameters, then abstract partials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Coord(Coord),
    Vel(Dir),
    Acc(Dir),
    Func(Func, u8),
    Param(Param),
    /// `Partial(u, k)` is the partial derivative of `u` taken `k[c]` times
    /// with respect to coordinate `c`.
    Partial(Unknown, [u8; 5]),
}

impl Atom {
    pub const S: Atom = Atom::Coord(Coord::S);
    pub const T: Atom = Atom::Coord(Coord::T);
    pub const X: Atom = Atom::Coord(Coord::X);
    pub const Y: Atom = Atom::Coord(Coord::Y);
    pub const Z: Atom = Atom::Coord(Coord::Z);

    pub fn coord(c: Coord) -> Atom {
        Atom::Coord(c)
    }

    pub fn vel(d: Dir) -> Atom {
        Atom::Vel(d)
    }

    pub fn func(f: Func) -> Atom {
        Atom::Func(f, 0)
    }

    pub fn unknown(u: Unknown) -> Atom {
        Atom::Partial(u, [0; 5])
    }

    pub fn is_velocity(&self) -> bool {
        matches!(self, Atom::Vel(_))
    }

    pub fn is_acceleration(&self) -> bool {
        matches!(self, Atom::Acc(_))
    }

    pub fn is_function(&self) -> bool {
        matches!(self, Atom::Func(..))
    }

    pub fn is_jet(&self) -> bool {
        self.is_velocity() || self.is_acceleration()
    }

    /// Partial derivative of this atom with respect to `sym`, as an atom when
    /// the result is another atom.
    pub(crate) fn derivative(&self, sym: &Atom) -> AtomDerivative {
        if self == sym {
            return AtomDerivative::One;
        }
        match (self, sym) {
            (Atom::Func(f, k), Atom::Coord(Coord::T)) => AtomDerivative::Atom(Atom::Func(*f, k + 1)),
            (Atom::Partial(u, idx), Atom::Coord(c)) => {
                let mut next = *idx;
                next[c.index()] += 1;
                AtomDerivative::Atom(Atom::Partial(*u, next))
            }
            _ => AtomDerivative::Zero,
        }
    }

    /// Whether this atom (through the functions it stands for) depends on
    /// coordinate `c`.
    pub fn depends_on(&self, c: Coord) -> bool {
        match self {
            Atom::Coord(own) => *own == c,
            Atom::Func(..) => c == Coord::T,
            Atom::Partial(..) => true,
            _ => false,
        }
    }
}

pub(crate) enum AtomDerivative {
    Zero,
    One,
    Atom(Atom),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Coord(c) => write!(f, "{}", c.letter()),
            Atom::Vel(d) => write!(f, "{}d", d.letter()),
            Atom::Acc(d) => write!(f, "{}dd", d.letter()),
            Atom::Func(func, k) => {
                write!(f, "{}", func.letter())?;
                for _ in 0..*k {
                    f.write_str("'")?;
                }
                f.write_str("(t)")
            }
            Atom::Param(Param::Alpha(i)) => write!(f, "a{i}"),
            Atom::Param(Param::LowerA) => f.write_str("a"),
            Atom::Param(Param::LowerB) => f.write_str("b"),
            Atom::Partial(u, idx) => {
                f.write_str(u.name())?;
                if idx.iter().any(|&k| k > 0) {
                    f.write_str("_")?;
                    for c in Coord::ALL {
                        for _ in 0..idx[c.index()] {
                            write!(f, "{}", c.letter())?;
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_order_matches_canonical_order() {
        let ordered = [
            Atom::S,
            Atom::T,
            Atom::X,
            Atom::Y,
            Atom::Z,
            Atom::Vel(Dir::T),
            Atom::Vel(Dir::Z),
            Atom::Acc(Dir::T),
            Atom::Acc(Dir::Z),
            Atom::Func(Func::A, 0),
            Atom::Func(Func::A, 1),
            Atom::Func(Func::A, 2),
            Atom::Func(Func::B, 0),
            Atom::Func(Func::C, 0),
            Atom::Param(Param::Alpha(1)),
            Atom::Param(Param::Alpha(9)),
            Atom::Param(Param::LowerA),
            Atom::Param(Param::LowerB),
            Atom::unknown(Unknown::Mu),
        ];
        assert!(ordered.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn printing() {
        assert_eq!(Atom::Func(Func::B, 2).to_string(), "B''(t)");
        assert_eq!(Atom::Partial(Unknown::Tau, [0, 1, 1, 0, 0]).to_string(), "tau_tx");
        assert_eq!(Atom::unknown(Unknown::Gauge).to_string(), "f");
        assert_eq!(Atom::Acc(Dir::Y).to_string(), "ydd");
    }
}

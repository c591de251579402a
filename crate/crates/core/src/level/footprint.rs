use alloc::string::String;
use alloc::vec::Vec;

use crate::gadget::DoorKind;
use crate::system::{GadgetSource, GadgetType};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Up,
    Down,
}

/// A rectangular tile block with ports on its top and bottom rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Footprint {
    pub w: usize,
    pub h: usize,
    pub tiles: Vec<u8>,
    /// Location id, x, y, and the side the port faces.
    pub ports: Vec<(String, usize, usize, Side)>,
}

const OPEN_CLOSE: [&str; 7] = [
    "##.###.###.##",
    "##..e..###.##",
    "##########.##",
    "######?###.##",
    "######.###.##",
    "######.###.##",
    "######.###.##",
];

const SELF_CLOSING: [&str; 7] = [
    "##.###.##",
    "##..e..##",
    "#########",
    "######?##",
    "######.##",
    "######.##",
    "######.##",
];

const SYMMETRIC: [&str; 7] = [
    "##.###.##",
    "##..e..##",
    "#########",
    "##^^^^^##",
    "#########",
    "##.....##",
    "##.###.##",
];

impl Footprint {
    /// Start or goal marker box with one upward port.
    pub fn terminal(marker: u8) -> Footprint {
        let mut tiles = Vec::from(*b"##.####.#######");
        tiles[7] = marker;
        Footprint {
            w: 5,
            h: 3,
            tiles,
            ports: Vec::from([(String::new(), 2, 0, Side::Up)]),
        }
    }

    fn from_rows(rows: &[&str]) -> Footprint {
        let w = rows[0].len();
        let tiles = rows.iter().flat_map(|r| r.bytes()).collect();
        Footprint {
            w,
            h: rows.len(),
            tiles,
            ports: Vec::new(),
        }
    }

    /// Solid box of bricks sized for `k` ports.
    fn generic(k: usize) -> Footprint {
        let top = k.div_ceil(2).max(1);
        let (w, h) = (4 * top + 1, 5);
        let mut tiles = alloc::vec![b'B'; w * h];
        for x in 0..w {
            tiles[x] = b'#';
            tiles[(h - 1) * w + x] = b'#';
        }
        for y in 0..h {
            tiles[y * w] = b'#';
            tiles[y * w + w - 1] = b'#';
        }
        Footprint {
            w,
            h,
            tiles,
            ports: Vec::new(),
        }
    }
}

/// Ports go clockwise: top row left to right, then bottom row right to
/// left, four tiles apart.
fn place_ports(fp: &mut Footprint, names: Vec<String>) {
    let top = names.len().div_ceil(2);
    for (i, name) in names.into_iter().enumerate() {
        let (x, y, side) = if i < top {
            (2 + 4 * i, 0, Side::Up)
        } else {
            (2 + 4 * (top - 1 - (i - top)), fp.h - 1, Side::Down)
        };
        fp.tiles[y * fp.w + x] = b'.';
        fp.ports.push((name, x, y, side));
    }
}

pub fn footprint_for(t: &GadgetType) -> Footprint {
    let names: Vec<String> = t.gadget.exposed_locations().map(|l| l.id.clone()).collect();
    let kind = match &t.source {
        GadgetSource::Library(name) => DoorKind::from_canonical_name(name),
        GadgetSource::Inline => None,
    };
    let mut fp = match kind {
        Some(DoorKind::OpenClose) => Footprint::from_rows(&OPEN_CLOSE),
        Some(DoorKind::SelfClosing) => Footprint::from_rows(&SELF_CLOSING),
        Some(DoorKind::SymmetricSelfClosing) => Footprint::from_rows(&SYMMETRIC),
        None => Footprint::generic(names.len()),
    };
    place_ports(&mut fp, names);
    fp
}

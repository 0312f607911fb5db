//! Derivation of typed address interfaces from a compiled spec, and their
//! rendering to Rust source and a structured dump.

mod derive;
pub mod ir;
pub mod names;
mod rust;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use derive::derive;
pub use ir::{Assertion, Cmp, Expr, FlatMemory, SimError, Ty};
pub use rust::render_rust;

/// Identifies the dump format.
pub const DUMP_FORMAT: &str = "flp-interface";
pub const DUMP_VERSION: u32 = 1;

/// Everything generated for one spec, independent of the target language.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedInterface {
    pub format: String,
    pub version: u32,
    pub word_bytes: u64,
    pub address_types: Vec<AddressType>,
    pub constants: Vec<NamedConstant>,
    pub functions: Vec<InterfaceFn>,
    pub maps: Vec<MapRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AddrKind {
    Layer,
    Field,
    /// Plain byte or word elements, used by maps.
    Unit,
}

/// A one-word wrapper type for addresses of one layer or field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddressType {
    pub name: String,
    pub kind: AddrKind,
    pub alignment_bytes: u64,
    pub size_bytes: Option<u64>,
    /// Dotted path of the declaration, e.g. `Cell.cell_1`.
    pub source: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstKind {
    Offset,
    /// Alignment as a power of two exponent.
    AlignLog2,
    AlignBytes,
    Size,
    LowBit,
    NumBits,
    Mask,
    Flag,
    Stride,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedConstant {
    pub name: String,
    pub kind: ConstKind,
    pub ty: Ty,
    pub value: u64,
    /// The address type this constant is emitted next to.
    pub owner: String,
    /// Associated with `owner` rather than at module level.
    pub associated: bool,
}

impl NamedConstant {
    /// The name bodies use to refer to this constant.
    pub fn path(&self) -> String {
        if self.associated {
            format!("{}::{}", self.owner, self.name)
        } else {
            self.name.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FnKind {
    Accessor,
    Cast,
    PtrGet,
    PtrSet,
    CursorInit,
    Bump,
    MapTranslate,
    MapSet,
    MapGet,
    ContainsUp,
    ContainsDown,
    BitsGet,
    BitsSet,
    EnumGet,
    EnumSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Receiver {
    /// Associated function.
    None,
    /// `self` (address types are `Copy`).
    Value,
    /// `&self` (map records).
    Ref,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub ty: Ty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceFn {
    pub kind: FnKind,
    /// Address type or map record the function belongs to.
    pub owner: String,
    pub name: String,
    pub receiver: Receiver,
    pub params: Vec<Param>,
    pub ret: Option<Ty>,
    pub debug_assertions: Vec<Assertion>,
    pub body: Expr,
}

/// Translation between two regions repeated by the same formal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRecord {
    pub name: String,
    /// The layer binding the formal.
    pub layer: String,
    pub formal: String,
    pub from_type: String,
    pub to_type: String,
    pub from_elem_bytes: u64,
    pub to_elem_bytes: u64,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CodegenError {
    #[error("constant `{name}` = {value} does not fit in a {word_bits}-bit word")]
    ConstantOverflow { name: String, value: u64, word_bits: u64 },
}

/// What a simulated call runs on.
#[derive(Clone, Debug)]
pub enum SimReceiver {
    None,
    Addr(u64),
    Record(BTreeMap<String, u64>),
}

impl GeneratedInterface {
    pub fn address_type(&self, name: &str) -> Option<&AddressType> {
        self.address_types.iter().find(|t| t.name == name)
    }

    /// Looks up a constant by owner type and name.
    pub fn constant(&self, owner: &str, name: &str) -> Option<&NamedConstant> {
        self.constants.iter().find(|c| c.owner == owner && c.name == name)
    }

    pub fn function(&self, owner: &str, name: &str) -> Option<&InterfaceFn> {
        self.functions.iter().find(|f| f.owner == owner && f.name == name)
    }

    pub fn map(&self, name: &str) -> Option<&MapRecord> {
        self.maps.iter().find(|m| m.name == name)
    }

    /// Constant values keyed by the paths bodies use.
    pub fn const_table(&self) -> BTreeMap<String, u64> {
        self.constants.iter().map(|c| (c.path(), c.value)).collect()
    }

    /// Runs a function on a simulated store. Arguments bind to the
    /// parameters in order; tuple results come back flattened.
    pub fn call(
        &self,
        f: &InterfaceFn,
        receiver: SimReceiver,
        args: &[u64],
        mem: &mut FlatMemory,
    ) -> Result<Vec<u64>, SimError> {
        let consts = self.const_table();
        let (recv, fields) = match receiver {
            SimReceiver::None => (None, BTreeMap::new()),
            SimReceiver::Addr(a) => (Some(a), BTreeMap::new()),
            SimReceiver::Record(r) => (None, r),
        };
        let params = f.params.iter().map(|p| p.name.clone()).zip(args.iter().copied()).collect();
        let fr = ir::Frame { receiver: recv, fields, params, consts: &consts, word_bytes: self.word_bytes };
        ir::run(&f.debug_assertions, &f.body, &fr, mem)
    }

    /// The structured dump: pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("interface serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

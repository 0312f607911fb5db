//! Address types, layout constants and accessors derived from a layout
//! specification. Generated by flpc; do not edit.
//!
//! Every address type wraps one machine word. Loads and stores are
//! unsynchronized and use native byte order; bit numbering assumes a
//! little-endian target.

#![allow(dead_code, non_camel_case_types, non_snake_case, non_upper_case_globals, unused_parens, clippy::all)]

/// Bytes per machine word on the target.
pub const WORD_BYTES : usize = 8;

const _: () = assert!(core::mem::size_of::<usize>() == WORD_BYTES);

/// Raw conversions shared by all address types.
pub trait Address: Copy {
    fn from_raw(raw: usize) -> Self;
    fn raw(self) -> usize;
}

macro_rules! deriveAddr {
    ($t:ident, $align:expr) => {
        impl Address for $t {
            #[inline(always)]
            fn from_raw(raw: usize) -> Self {
                $t(raw)
            }
            #[inline(always)]
            fn raw(self) -> usize {
                self.0
            }
        }
        impl $t {
            pub const ALIGN_BYTES: usize = $align;
            #[inline(always)]
            pub fn from_usize(raw: usize) -> Self {
                debug_assert!(raw % Self::ALIGN_BYTES == 0, "misaligned address");
                $t(raw)
            }
            #[inline(always)]
            pub fn as_usize(self) -> usize {
                self.0
            }
            #[inline(always)]
            pub(crate) fn plus<T: Address>(self, bytes: usize) -> T {
                T::from_raw(self.0 + bytes)
            }
            #[inline(always)]
            pub(crate) fn sub<T: Address>(self, bytes: usize) -> T {
                T::from_raw(self.0 - bytes)
            }
            #[inline(always)]
            pub(crate) fn load<V: Copy>(self) -> V {
                unsafe { (self.0 as *const V).read_unaligned() }
            }
            #[inline(always)]
            pub(crate) fn store<V: Copy>(self, v: V) {
                unsafe { (self.0 as *mut V).write_unaligned(v) }
            }
        }
    };
}

// Cell
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellAddr(usize);
pub const CELL_BYTES_ALIGN : usize = 1;
deriveAddr!(CellAddr, CELL_BYTES_ALIGN);

// SizeKls
pub const SIZE_KLS_SIZE : usize = 65536;
pub const SIZE_KLS_CELLS_OFFSET : usize = 0;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizeKlsAddr(usize);
pub const SIZE_KLS_ALIGN : usize = 16;
deriveAddr!(SizeKlsAddr, 1 << SIZE_KLS_ALIGN);
impl SizeKlsAddr {
    #[inline(always)]
    pub fn cells(self) -> SizeKls_CellsAddr {
        self.plus::<SizeKls_CellsAddr>(SIZE_KLS_CELLS_OFFSET)
    }
    #[inline(always)]
    pub fn from_cells(x: SizeKls_CellsAddr) -> Self {
        x.sub::<Self>(SIZE_KLS_CELLS_OFFSET)
    }
    #[inline(always)]
    pub fn get_first_cell_sz(self) -> Cell_szAddr {
        Cell_szAddr::from_usize(self.as_usize())
    }
}

// SizeKls.cells
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizeKls_CellsAddr(usize);
pub const SIZE_KLS_CELLS_BYTES_ALIGN : usize = 1;
deriveAddr!(SizeKls_CellsAddr, SIZE_KLS_CELLS_BYTES_ALIGN);
impl SizeKls_CellsAddr {
    #[inline(always)]
    pub fn get_first_cell_sz(self) -> Cell_szAddr {
        Cell_szAddr::from_usize(self.as_usize())
    }
}

// SizeKls.cells.Cell_sz
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell_szAddr(usize);
pub const CELL_SZ_BYTES_ALIGN : usize = 1;
deriveAddr!(Cell_szAddr, CELL_SZ_BYTES_ALIGN);

// SizeKls.map
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizeKls_MapAddr(usize);
pub const SIZE_KLS_MAP_BYTES_ALIGN : usize = 1;
deriveAddr!(SizeKls_MapAddr, SIZE_KLS_MAP_BYTES_ALIGN);

// Kls16
pub const KLS16_SIZE : usize = 65536;
pub const SIZE_KLS_16_OFFSET : usize = 0;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Kls16Addr(usize);
pub const KLS16_BYTES_ALIGN : usize = 1;
deriveAddr!(Kls16Addr, KLS16_BYTES_ALIGN);
impl Kls16Addr {
    #[inline(always)]
    pub fn size_kls_16(self) -> SizeKls_16Addr {
        self.plus::<SizeKls_16Addr>(SIZE_KLS_16_OFFSET)
    }
    #[inline(always)]
    pub fn from_size_kls_16(x: SizeKls_16Addr) -> Self {
        x.sub::<Self>(SIZE_KLS_16_OFFSET)
    }
    #[inline(always)]
    pub fn get_first_cell_16(self) -> Cell_16Addr {
        Cell_16Addr::from_usize(self.as_usize())
    }
}

// Kls16.SizeKls_16
pub const SIZE_KLS_16_SIZE : usize = 65536;
pub const SIZE_KLS_16_CELLS_OFFSET : usize = 0;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizeKls_16Addr(usize);
pub const SIZE_KLS_16_ALIGN : usize = 16;
deriveAddr!(SizeKls_16Addr, 1 << SIZE_KLS_16_ALIGN);
impl SizeKls_16Addr {
    #[inline(always)]
    pub fn cells(self) -> SizeKls_16_CellsAddr {
        self.plus::<SizeKls_16_CellsAddr>(SIZE_KLS_16_CELLS_OFFSET)
    }
    #[inline(always)]
    pub fn from_cells(x: SizeKls_16_CellsAddr) -> Self {
        x.sub::<Self>(SIZE_KLS_16_CELLS_OFFSET)
    }
    #[inline(always)]
    pub fn get_first_cell_16(self) -> Cell_16Addr {
        Cell_16Addr::from_usize(self.as_usize())
    }
    #[inline(always)]
    pub fn cast_size_kls_16_to_cells(self) -> SizeKls_16_CellsAddr {
        self.plus::<SizeKls_16_CellsAddr>(0)
    }
    #[inline(always)]
    pub fn init_map_after_cells(p1: SizeKls_16_CellsAddr, bytes: usize) -> SizeKls_16_MapAddr {
        debug_assert!((bytes % 128) == 0);
        debug_assert!(bytes <= 65536);
        p1.plus::<SizeKls_16_MapAddr>(bytes)
    }
    #[inline(always)]
    pub fn bump_new_Cell_16(rhs: SizeKls_16_MapAddr) -> (SizeKls_16_CellsAddr, SizeKls_16_MapAddr) {
        (SizeKls_16_CellsAddr::from_usize(rhs.as_usize()), rhs.plus::<SizeKls_16_MapAddr>(128))
    }
}

// Kls16.SizeKls_16.cells
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizeKls_16_CellsAddr(usize);
pub const SIZE_KLS_16_CELLS_BYTES_ALIGN : usize = 1;
deriveAddr!(SizeKls_16_CellsAddr, SIZE_KLS_16_CELLS_BYTES_ALIGN);
impl SizeKls_16_CellsAddr {
    #[inline(always)]
    pub fn get_first_cell_16(self) -> Cell_16Addr {
        Cell_16Addr::from_usize(self.as_usize())
    }
}

// Kls16.SizeKls_16.cells.Cell_16
pub const CELL_16_SIZE : usize = 128;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell_16Addr(usize);
pub const CELL_16_BYTES_ALIGN : usize = 1;
deriveAddr!(Cell_16Addr, CELL_16_BYTES_ALIGN);

// Kls16.SizeKls_16.map
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizeKls_16_MapAddr(usize);
pub const SIZE_KLS_16_MAP_BYTES_ALIGN : usize = 1;
deriveAddr!(SizeKls_16_MapAddr, SIZE_KLS_16_MAP_BYTES_ALIGN);

// byte unit (1 bytes)
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ByteAddr(usize);
pub const BYTE_BYTES_ALIGN : usize = 1;
deriveAddr!(ByteAddr, BYTE_BYTES_ALIGN);

// Cell_16Addr elements of `Kls16Addr` to ByteAddr, both repeated by `cnt`
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Cell2Byte {
    pub from_base: Cell_16Addr,
    pub to_base: ByteAddr,
    pub end: ByteAddr,
}
impl Cell2Byte {
    pub const FROM_ELEM_BYTES : usize = 128;
    pub const TO_ELEM_BYTES : usize = 1;
    pub fn new(from_base: Cell_16Addr, to_base: ByteAddr, end: ByteAddr) -> Self {
        Self { from_base, to_base, end }
    }
    #[inline(always)]
    pub fn translate(&self, from: Cell_16Addr) -> ByteAddr {
        debug_assert!(from.as_usize() >= self.from_base.as_usize());
        debug_assert!(self.end.as_usize() > (self.to_base.as_usize() + ((from.as_usize() - self.from_base.as_usize()) >> 7)));
        self.to_base.plus::<ByteAddr>((from.as_usize() - self.from_base.as_usize()) >> 7)
    }
    #[inline(always)]
    pub fn set(&self, from: Cell_16Addr, val: u8) {
        debug_assert!(from.as_usize() >= self.from_base.as_usize());
        debug_assert!(self.end.as_usize() > (self.to_base.as_usize() + ((from.as_usize() - self.from_base.as_usize()) >> 7)));
        self.to_base.plus::<ByteAddr>((from.as_usize() - self.from_base.as_usize()) >> 7).store::<u8>(val)
    }
    #[inline(always)]
    pub fn get(&self, from: Cell_16Addr) -> u8 {
        debug_assert!(from.as_usize() >= self.from_base.as_usize());
        debug_assert!(self.end.as_usize() > (self.to_base.as_usize() + ((from.as_usize() - self.from_base.as_usize()) >> 7)));
        self.to_base.plus::<ByteAddr>((from.as_usize() - self.from_base.as_usize()) >> 7).load::<u8>()
    }
    #[inline(always)]
    pub fn translate_back(&self, to: ByteAddr) -> Cell_16Addr {
        debug_assert!(to.as_usize() >= self.to_base.as_usize());
        debug_assert!(self.end.as_usize() > to.as_usize());
        self.from_base.plus::<Cell_16Addr>((to.as_usize() - self.to_base.as_usize()) << 7)
    }
}

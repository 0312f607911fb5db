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

// Region
pub const SPACE_OFFSET : usize = 0;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegionAddr(usize);
pub const REGION_BYTES_ALIGN : usize = 1;
deriveAddr!(RegionAddr, REGION_BYTES_ALIGN);
impl RegionAddr {
    #[inline(always)]
    pub fn space(self) -> SpaceAddr {
        self.plus::<SpaceAddr>(SPACE_OFFSET)
    }
    #[inline(always)]
    pub fn from_space(x: SpaceAddr) -> Self {
        x.sub::<Self>(SPACE_OFFSET)
    }
    #[inline(always)]
    pub fn get_first_free_block(self) -> FreeBlockAddr {
        FreeBlockAddr::from_usize(self.as_usize())
    }
    #[inline(always)]
    pub fn get_first_block(self) -> BlockAddr {
        BlockAddr::from_usize(self.as_usize())
    }
    #[inline(always)]
    pub fn get_first_free_cell(self) -> FreeCellAddr {
        FreeCellAddr::from_usize(self.as_usize())
    }
    #[inline(always)]
    pub fn get_first_cell(self) -> CellAddr {
        CellAddr::from_usize(self.as_usize())
    }
    #[inline(always)]
    pub fn get_first_line(self) -> LineAddr {
        LineAddr::from_usize(self.as_usize())
    }
    #[inline(always)]
    pub fn init_refs_after_lms(p1: LmsAddr, bytes: usize) -> RefsAddr {
        p1.plus::<RefsAddr>(bytes)
    }
    #[inline(always)]
    pub fn bump_new_LineMark(rhs: RefsAddr) -> (LmsAddr, RefsAddr) {
        (LmsAddr::from_usize(rhs.as_usize()), rhs.plus::<RefsAddr>(1))
    }
    #[inline(always)]
    pub fn init_mks_after_refs(p1: RefsAddr, bytes: usize) -> MksAddr {
        p1.plus::<MksAddr>(bytes)
    }
    #[inline(always)]
    pub fn bump_new_RefBits(rhs: MksAddr) -> (RefsAddr, MksAddr) {
        (RefsAddr::from_usize(rhs.as_usize()), rhs.plus::<MksAddr>(1))
    }
}

// Region.Space
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpaceAddr(usize);
pub const SPACE_ALIGN : usize = 19;
deriveAddr!(SpaceAddr, 1 << SPACE_ALIGN);
impl SpaceAddr {
    #[inline(always)]
    pub fn get_first_free_block(self) -> FreeBlockAddr {
        FreeBlockAddr::from_usize(self.as_usize())
    }
    #[inline(always)]
    pub fn get_first_block(self) -> BlockAddr {
        BlockAddr::from_usize(self.as_usize())
    }
    #[inline(always)]
    pub fn get_first_free_cell(self) -> FreeCellAddr {
        FreeCellAddr::from_usize(self.as_usize())
    }
    #[inline(always)]
    pub fn get_first_cell(self) -> CellAddr {
        CellAddr::from_usize(self.as_usize())
    }
    #[inline(always)]
    pub fn get_first_line(self) -> LineAddr {
        LineAddr::from_usize(self.as_usize())
    }
}

// Region.Space.FreeBlock
pub const FREE_BLOCK_SIZE : usize = 65536;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeBlockAddr(usize);
pub const FREE_BLOCK_ALIGN : usize = 16;
deriveAddr!(FreeBlockAddr, 1 << FREE_BLOCK_ALIGN);

// Region.Space.Block
pub const BLOCK_SIZE : usize = 65536;
pub const CELLS_OFFSET : usize = 0;
pub const BLOCK_LINE_STRIDE : usize = 256;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockAddr(usize);
pub const BLOCK_ALIGN : usize = 16;
deriveAddr!(BlockAddr, 1 << BLOCK_ALIGN);
impl BlockAddr {
    #[inline(always)]
    pub fn cells(self) -> CellsAddr {
        self.plus::<CellsAddr>(CELLS_OFFSET)
    }
    #[inline(always)]
    pub fn from_cells(x: CellsAddr) -> Self {
        x.sub::<Self>(CELLS_OFFSET)
    }
    #[inline(always)]
    pub fn get_first_free_cell(self) -> FreeCellAddr {
        FreeCellAddr::from_usize(self.as_usize())
    }
    #[inline(always)]
    pub fn get_first_cell(self) -> CellAddr {
        CellAddr::from_usize(self.as_usize())
    }
    #[inline(always)]
    pub fn first_line(self) -> LineAddr {
        LineAddr::from_usize(self.as_usize())
    }
}

// Region.Space.Block.cells
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellsAddr(usize);
pub const CELLS_BYTES_ALIGN : usize = 1;
deriveAddr!(CellsAddr, CELLS_BYTES_ALIGN);
impl CellsAddr {
    #[inline(always)]
    pub fn get_first_free_cell(self) -> FreeCellAddr {
        FreeCellAddr::from_usize(self.as_usize())
    }
    #[inline(always)]
    pub fn get_first_cell(self) -> CellAddr {
        CellAddr::from_usize(self.as_usize())
    }
}

// Region.Space.Block.cells.FreeCell
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeCellAddr(usize);
pub const FREE_CELL_ALIGN : usize = 3;
deriveAddr!(FreeCellAddr, 1 << FREE_CELL_ALIGN);

// Region.Space.Block.remainder
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RemainderAddr(usize);
pub const REMAINDER_BYTES_ALIGN : usize = 1;
deriveAddr!(RemainderAddr, REMAINDER_BYTES_ALIGN);

// Region.Space.Block.limit
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LimitAddr(usize);
pub const LIMIT_BYTES_ALIGN : usize = 1;
deriveAddr!(LimitAddr, LIMIT_BYTES_ALIGN);

// Region.Space.Line
pub const LINE_SIZE : usize = 256;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineAddr(usize);
pub const LINE_ALIGN : usize = 8;
deriveAddr!(LineAddr, 1 << LINE_ALIGN);
impl LineAddr {
    #[inline(always)]
    pub fn containing_block(self) -> BlockAddr {
        BlockAddr::from_usize(self.as_usize() & !((1usize << BLOCK_ALIGN) - 1))
    }
    #[inline(always)]
    pub fn first_cell(self) -> CellAddr {
        CellAddr::from_usize(self.as_usize())
    }
}

// Region.lms
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LmsAddr(usize);
pub const LMS_BYTES_ALIGN : usize = 1;
deriveAddr!(LmsAddr, LMS_BYTES_ALIGN);
impl LmsAddr {
    #[inline(always)]
    pub fn get_first_line_mark(self) -> LineMarkAddr {
        LineMarkAddr::from_usize(self.as_usize())
    }
}

// Region.refs
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RefsAddr(usize);
pub const REFS_BYTES_ALIGN : usize = 1;
deriveAddr!(RefsAddr, REFS_BYTES_ALIGN);
impl RefsAddr {
    #[inline(always)]
    pub fn get_first_ref_bits(self) -> RefBitsAddr {
        RefBitsAddr::from_usize(self.as_usize())
    }
}

// Region.mks
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MksAddr(usize);
pub const MKS_BYTES_ALIGN : usize = 1;
deriveAddr!(MksAddr, MKS_BYTES_ALIGN);
impl MksAddr {
    #[inline(always)]
    pub fn get_first_mark_bits(self) -> MarkBitsAddr {
        MarkBitsAddr::from_usize(self.as_usize())
    }
}

// Cell
pub const CELL_0_OFFSET : usize = 0;
pub const CELL_1_OFFSET : usize = 8;
pub const CELL_2_OFFSET : usize = 16;
pub const CELL_3_OFFSET : usize = 24;
pub const PAYLOAD_OFFSET : usize = 32;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellAddr(usize);
pub const CELL_ALIGN : usize = 3;
deriveAddr!(CellAddr, 1 << CELL_ALIGN);
impl CellAddr {
    #[inline(always)]
    pub fn containing_line(self) -> LineAddr {
        LineAddr::from_usize(self.as_usize() & !((1usize << LINE_ALIGN) - 1))
    }
    #[inline(always)]
    pub fn cell_0(self) -> Cell_0Addr {
        self.plus::<Cell_0Addr>(CELL_0_OFFSET)
    }
    #[inline(always)]
    pub fn from_cell_0(x: Cell_0Addr) -> Self {
        x.sub::<Self>(CELL_0_OFFSET)
    }
    #[inline(always)]
    pub fn cell_1(self) -> Cell_1Addr {
        self.plus::<Cell_1Addr>(CELL_1_OFFSET)
    }
    #[inline(always)]
    pub fn from_cell_1(x: Cell_1Addr) -> Self {
        x.sub::<Self>(CELL_1_OFFSET)
    }
    #[inline(always)]
    pub fn cell_2(self) -> Cell_2Addr {
        self.plus::<Cell_2Addr>(CELL_2_OFFSET)
    }
    #[inline(always)]
    pub fn from_cell_2(x: Cell_2Addr) -> Self {
        x.sub::<Self>(CELL_2_OFFSET)
    }
    #[inline(always)]
    pub fn cell_3(self) -> Cell_3Addr {
        self.plus::<Cell_3Addr>(CELL_3_OFFSET)
    }
    #[inline(always)]
    pub fn from_cell_3(x: Cell_3Addr) -> Self {
        x.sub::<Self>(CELL_3_OFFSET)
    }
    #[inline(always)]
    pub fn payload(self) -> PayloadAddr {
        self.plus::<PayloadAddr>(PAYLOAD_OFFSET)
    }
    #[inline(always)]
    pub fn from_payload(x: PayloadAddr) -> Self {
        x.sub::<Self>(PAYLOAD_OFFSET)
    }
}

// Cell.cell_0
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell_0Addr(usize);
pub const CELL_0_BYTES_ALIGN : usize = 1;
deriveAddr!(Cell_0Addr, CELL_0_BYTES_ALIGN);
impl Cell_0Addr {
    #[inline(always)]
    pub fn get_cell(self) -> CellAddr {
        self.load::<CellAddr>()
    }
    #[inline(always)]
    pub fn set_cell(self, ptr: CellAddr) {
        self.store::<CellAddr>(ptr)
    }
}

// Cell.cell_1
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell_1Addr(usize);
pub const CELL_1_BYTES_ALIGN : usize = 1;
deriveAddr!(Cell_1Addr, CELL_1_BYTES_ALIGN);
impl Cell_1Addr {
    #[inline(always)]
    pub fn get_cell(self) -> CellAddr {
        self.load::<CellAddr>()
    }
    #[inline(always)]
    pub fn set_cell(self, ptr: CellAddr) {
        self.store::<CellAddr>(ptr)
    }
}

// Cell.cell_2
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell_2Addr(usize);
pub const CELL_2_BYTES_ALIGN : usize = 1;
deriveAddr!(Cell_2Addr, CELL_2_BYTES_ALIGN);
impl Cell_2Addr {
    #[inline(always)]
    pub fn get_cell(self) -> CellAddr {
        self.load::<CellAddr>()
    }
    #[inline(always)]
    pub fn set_cell(self, ptr: CellAddr) {
        self.store::<CellAddr>(ptr)
    }
}

// Cell.cell_3
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell_3Addr(usize);
pub const CELL_3_BYTES_ALIGN : usize = 1;
deriveAddr!(Cell_3Addr, CELL_3_BYTES_ALIGN);
impl Cell_3Addr {
    #[inline(always)]
    pub fn get_cell(self) -> CellAddr {
        self.load::<CellAddr>()
    }
    #[inline(always)]
    pub fn set_cell(self, ptr: CellAddr) {
        self.store::<CellAddr>(ptr)
    }
}

// Cell.payload
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PayloadAddr(usize);
pub const PAYLOAD_BYTES_ALIGN : usize = 1;
deriveAddr!(PayloadAddr, PAYLOAD_BYTES_ALIGN);

// RefBits
pub const REF_BITS_SIZE : usize = 1;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RefBitsAddr(usize);
pub const REF_BITS_BYTES_ALIGN : usize = 1;
deriveAddr!(RefBitsAddr, REF_BITS_BYTES_ALIGN);
impl RefBitsAddr {
    pub const SHORT_ENCODE_LOW_BIT : usize = 0;
    pub const SHORT_ENCODE_NUM_BITS : usize = 1;
    pub const SHORT_ENCODE_MASK : u8 = 0b00000001;
    pub const OBJ_START_LOW_BIT : usize = 1;
    pub const OBJ_START_NUM_BITS : usize = 1;
    pub const OBJ_START_MASK : u8 = 0b00000010;
    pub const REF_LOW_BIT : usize = 2;
    pub const REF_NUM_BITS : usize = 6;
    pub const REF_MASK : u8 = 0b11111100;
    #[inline(always)]
    pub fn get_SHORT_ENCODE_bit(self) -> bool {
        ((self.load::<u8>() & Self::SHORT_ENCODE_MASK) >> Self::SHORT_ENCODE_LOW_BIT) != 0
    }
    #[inline(always)]
    pub fn set_SHORT_ENCODE_bit(self, val: bool) {
        self.store::<u8>((self.load::<u8>() & !Self::SHORT_ENCODE_MASK) | (((val as u8) << Self::SHORT_ENCODE_LOW_BIT) & Self::SHORT_ENCODE_MASK))
    }
    #[inline(always)]
    pub fn get_OBJ_START_bit(self) -> bool {
        ((self.load::<u8>() & Self::OBJ_START_MASK) >> Self::OBJ_START_LOW_BIT) != 0
    }
    #[inline(always)]
    pub fn set_OBJ_START_bit(self, val: bool) {
        self.store::<u8>((self.load::<u8>() & !Self::OBJ_START_MASK) | (((val as u8) << Self::OBJ_START_LOW_BIT) & Self::OBJ_START_MASK))
    }
    #[inline(always)]
    pub fn get_REF_bits(self) -> u8 {
        (self.load::<u8>() & Self::REF_MASK) >> Self::REF_LOW_BIT
    }
    #[inline(always)]
    pub fn set_REF_bits(self, val: u8) {
        self.store::<u8>((self.load::<u8>() & !Self::REF_MASK) | (((val as u8) << Self::REF_LOW_BIT) & Self::REF_MASK))
    }
}

// LineMark
pub const LINE_MARK_SIZE : usize = 1;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineMarkAddr(usize);
pub const LINE_MARK_BYTES_ALIGN : usize = 1;
deriveAddr!(LineMarkAddr, LINE_MARK_BYTES_ALIGN);
impl LineMarkAddr {
    pub const FREE : u8 = 0;
    pub const LIVE : u8 = 1;
    pub const FRESH_ALLOC : u8 = 2;
    pub const CONSERV_LIVE : u8 = 3;
    pub const PREV_LIVE : u8 = 4;
    #[inline(always)]
    pub fn get_flag(self) -> u8 {
        self.load::<u8>()
    }
    #[inline(always)]
    pub fn set_flag(self, val: u8) {
        debug_assert!(val < 5);
        self.store::<u8>(val)
    }
}

// MarkBits
pub const MARK_BITS_SIZE : usize = 1;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkBitsAddr(usize);
pub const MARK_BITS_BYTES_ALIGN : usize = 1;
deriveAddr!(MarkBitsAddr, MARK_BITS_BYTES_ALIGN);
impl MarkBitsAddr {
    pub const MARK_LOW_BIT : usize = 0;
    pub const MARK_NUM_BITS : usize = 8;
    pub const MARK_MASK : u8 = 0b11111111;
    #[inline(always)]
    pub fn get_MARK_bits(self) -> u8 {
        (self.load::<u8>() & Self::MARK_MASK) >> Self::MARK_LOW_BIT
    }
    #[inline(always)]
    pub fn set_MARK_bits(self, val: u8) {
        self.store::<u8>((self.load::<u8>() & !Self::MARK_MASK) | (((val as u8) << Self::MARK_LOW_BIT) & Self::MARK_MASK))
    }
}

// Stk
pub const STACK_OFFSET : usize = 0;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StkAddr(usize);
pub const STK_BYTES_ALIGN : usize = 1;
deriveAddr!(StkAddr, STK_BYTES_ALIGN);
impl StkAddr {
    #[inline(always)]
    pub fn stack(self) -> StackAddr {
        self.plus::<StackAddr>(STACK_OFFSET)
    }
    #[inline(always)]
    pub fn from_stack(x: StackAddr) -> Self {
        x.sub::<Self>(STACK_OFFSET)
    }
}

// Stk.stack
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StackAddr(usize);
pub const STACK_BYTES_ALIGN : usize = 1;
deriveAddr!(StackAddr, STACK_BYTES_ALIGN);
impl StackAddr {
    #[inline(always)]
    pub fn get_cell(self) -> CellAddr {
        self.load::<CellAddr>()
    }
    #[inline(always)]
    pub fn set_cell(self, ptr: CellAddr) {
        self.store::<CellAddr>(ptr)
    }
}

// Stk.lowWater
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LowWaterAddr(usize);
pub const LOW_WATER_BYTES_ALIGN : usize = 1;
deriveAddr!(LowWaterAddr, LOW_WATER_BYTES_ALIGN);

// Registers
pub const REGS_OFFSET : usize = 0;
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegistersAddr(usize);
pub const REGISTERS_BYTES_ALIGN : usize = 1;
deriveAddr!(RegistersAddr, REGISTERS_BYTES_ALIGN);
impl RegistersAddr {
    #[inline(always)]
    pub fn regs(self) -> RegsAddr {
        self.plus::<RegsAddr>(REGS_OFFSET)
    }
    #[inline(always)]
    pub fn from_regs(x: RegsAddr) -> Self {
        x.sub::<Self>(REGS_OFFSET)
    }
}

// Registers.regs
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegsAddr(usize);
pub const REGS_BYTES_ALIGN : usize = 1;
deriveAddr!(RegsAddr, REGS_BYTES_ALIGN);
impl RegsAddr {
    #[inline(always)]
    pub fn get_cell(self) -> CellAddr {
        self.load::<CellAddr>()
    }
    #[inline(always)]
    pub fn set_cell(self, ptr: CellAddr) {
        self.store::<CellAddr>(ptr)
    }
}

// Registers.regsEnd
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegsEndAddr(usize);
pub const REGS_END_BYTES_ALIGN : usize = 1;
deriveAddr!(RegsEndAddr, REGS_END_BYTES_ALIGN);

// word unit (8 bytes)
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordAddr(usize);
pub const WORD_BYTES_ALIGN : usize = 1;
deriveAddr!(WordAddr, WORD_BYTES_ALIGN);

// LineAddr elements of `RegionAddr` to LineMarkAddr, both repeated by `lines`
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Line2LineMark {
    pub from_base: LineAddr,
    pub to_base: LineMarkAddr,
    pub end: LineMarkAddr,
}
impl Line2LineMark {
    pub const FROM_ELEM_BYTES : usize = 256;
    pub const TO_ELEM_BYTES : usize = 1;
    pub fn new(from_base: LineAddr, to_base: LineMarkAddr, end: LineMarkAddr) -> Self {
        Self { from_base, to_base, end }
    }
    #[inline(always)]
    pub fn translate(&self, from: LineAddr) -> LineMarkAddr {
        debug_assert!(from.as_usize() >= self.from_base.as_usize());
        debug_assert!(self.end.as_usize() > (self.to_base.as_usize() + ((from.as_usize() - self.from_base.as_usize()) >> 8)));
        self.to_base.plus::<LineMarkAddr>((from.as_usize() - self.from_base.as_usize()) >> 8)
    }
    #[inline(always)]
    pub fn set(&self, from: LineAddr, val: u8) {
        debug_assert!(from.as_usize() >= self.from_base.as_usize());
        debug_assert!(self.end.as_usize() > (self.to_base.as_usize() + ((from.as_usize() - self.from_base.as_usize()) >> 8)));
        self.to_base.plus::<LineMarkAddr>((from.as_usize() - self.from_base.as_usize()) >> 8).store::<u8>(val)
    }
    #[inline(always)]
    pub fn get(&self, from: LineAddr) -> u8 {
        debug_assert!(from.as_usize() >= self.from_base.as_usize());
        debug_assert!(self.end.as_usize() > (self.to_base.as_usize() + ((from.as_usize() - self.from_base.as_usize()) >> 8)));
        self.to_base.plus::<LineMarkAddr>((from.as_usize() - self.from_base.as_usize()) >> 8).load::<u8>()
    }
    #[inline(always)]
    pub fn translate_back(&self, to: LineMarkAddr) -> LineAddr {
        debug_assert!(to.as_usize() >= self.to_base.as_usize());
        debug_assert!(self.end.as_usize() > to.as_usize());
        self.from_base.plus::<LineAddr>((to.as_usize() - self.to_base.as_usize()) << 8)
    }
}

// WordAddr elements of `RegionAddr` to RefBitsAddr, both repeated by `wrds`
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Word2RefBits {
    pub from_base: WordAddr,
    pub to_base: RefBitsAddr,
    pub end: RefBitsAddr,
}
impl Word2RefBits {
    pub const FROM_ELEM_BYTES : usize = 8;
    pub const TO_ELEM_BYTES : usize = 1;
    pub fn new(from_base: WordAddr, to_base: RefBitsAddr, end: RefBitsAddr) -> Self {
        Self { from_base, to_base, end }
    }
    #[inline(always)]
    pub fn translate(&self, from: WordAddr) -> RefBitsAddr {
        debug_assert!(from.as_usize() >= self.from_base.as_usize());
        debug_assert!(self.end.as_usize() > (self.to_base.as_usize() + ((from.as_usize() - self.from_base.as_usize()) >> 3)));
        self.to_base.plus::<RefBitsAddr>((from.as_usize() - self.from_base.as_usize()) >> 3)
    }
    #[inline(always)]
    pub fn set(&self, from: WordAddr, val: u8) {
        debug_assert!(from.as_usize() >= self.from_base.as_usize());
        debug_assert!(self.end.as_usize() > (self.to_base.as_usize() + ((from.as_usize() - self.from_base.as_usize()) >> 3)));
        self.to_base.plus::<RefBitsAddr>((from.as_usize() - self.from_base.as_usize()) >> 3).store::<u8>(val)
    }
    #[inline(always)]
    pub fn get(&self, from: WordAddr) -> u8 {
        debug_assert!(from.as_usize() >= self.from_base.as_usize());
        debug_assert!(self.end.as_usize() > (self.to_base.as_usize() + ((from.as_usize() - self.from_base.as_usize()) >> 3)));
        self.to_base.plus::<RefBitsAddr>((from.as_usize() - self.from_base.as_usize()) >> 3).load::<u8>()
    }
    #[inline(always)]
    pub fn translate_back(&self, to: RefBitsAddr) -> WordAddr {
        debug_assert!(to.as_usize() >= self.to_base.as_usize());
        debug_assert!(self.end.as_usize() > to.as_usize());
        self.from_base.plus::<WordAddr>((to.as_usize() - self.to_base.as_usize()) << 3)
    }
}

// WordAddr elements of `RegionAddr` to MarkBitsAddr, both repeated by `wrds`
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Word2MarkBits {
    pub from_base: WordAddr,
    pub to_base: MarkBitsAddr,
    pub end: MarkBitsAddr,
}
impl Word2MarkBits {
    pub const FROM_ELEM_BYTES : usize = 8;
    pub const TO_ELEM_BYTES : usize = 1;
    pub fn new(from_base: WordAddr, to_base: MarkBitsAddr, end: MarkBitsAddr) -> Self {
        Self { from_base, to_base, end }
    }
    #[inline(always)]
    pub fn translate(&self, from: WordAddr) -> MarkBitsAddr {
        debug_assert!(from.as_usize() >= self.from_base.as_usize());
        debug_assert!(self.end.as_usize() > (self.to_base.as_usize() + ((from.as_usize() - self.from_base.as_usize()) >> 3)));
        self.to_base.plus::<MarkBitsAddr>((from.as_usize() - self.from_base.as_usize()) >> 3)
    }
    #[inline(always)]
    pub fn set(&self, from: WordAddr, val: u8) {
        debug_assert!(from.as_usize() >= self.from_base.as_usize());
        debug_assert!(self.end.as_usize() > (self.to_base.as_usize() + ((from.as_usize() - self.from_base.as_usize()) >> 3)));
        self.to_base.plus::<MarkBitsAddr>((from.as_usize() - self.from_base.as_usize()) >> 3).store::<u8>(val)
    }
    #[inline(always)]
    pub fn get(&self, from: WordAddr) -> u8 {
        debug_assert!(from.as_usize() >= self.from_base.as_usize());
        debug_assert!(self.end.as_usize() > (self.to_base.as_usize() + ((from.as_usize() - self.from_base.as_usize()) >> 3)));
        self.to_base.plus::<MarkBitsAddr>((from.as_usize() - self.from_base.as_usize()) >> 3).load::<u8>()
    }
    #[inline(always)]
    pub fn translate_back(&self, to: MarkBitsAddr) -> WordAddr {
        debug_assert!(to.as_usize() >= self.to_base.as_usize());
        debug_assert!(self.end.as_usize() > to.as_usize());
        self.from_base.plus::<WordAddr>((to.as_usize() - self.to_base.as_usize()) << 3)
    }
}

//! Zobrist keys, generated at compile time from a fixed splitmix64 stream.

const fn splitmix64(state: u64) -> (u64, u64) {
    let state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (state, z ^ (z >> 31))
}

pub struct Keys {
    pub pieces: [[u64; 64]; 12],
    pub castling: [u64; 16],
    pub ep_file: [u64; 8],
    pub side: u64,
}

const fn build() -> Keys {
    let mut state = 0x5EED_C0DE_0000_0001u64;
    let mut pieces = [[0u64; 64]; 12];
    let mut p = 0;
    while p < 12 {
        let mut s = 0;
        while s < 64 {
            let (next, v) = splitmix64(state);
            state = next;
            pieces[p][s] = v;
            s += 1;
        }
        p += 1;
    }
    // Castling keys are XOR-composed from the four single-right keys, so the
    // key of a rights set equals the XOR of its members.
    let mut single = [0u64; 4];
    let mut i = 0;
    while i < 4 {
        let (next, v) = splitmix64(state);
        state = next;
        single[i] = v;
        i += 1;
    }
    let mut castling = [0u64; 16];
    let mut bits = 0;
    while bits < 16 {
        let mut k = 0u64;
        let mut j = 0;
        while j < 4 {
            if bits & (1 << j) != 0 {
                k ^= single[j];
            }
            j += 1;
        }
        castling[bits] = k;
        bits += 1;
    }
    let mut ep_file = [0u64; 8];
    let mut f = 0;
    while f < 8 {
        let (next, v) = splitmix64(state);
        state = next;
        ep_file[f] = v;
        f += 1;
    }
    let (_, side) = splitmix64(state);
    Keys { pieces, castling, ep_file, side }
}

pub static KEYS: Keys = build();

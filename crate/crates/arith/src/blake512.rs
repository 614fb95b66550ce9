//! BLAKE-512 (the original SHA-3 finalist), used for EdDSA key expansion
//! and deterministic nonces, byte compatible with the reference wallet
//! tooling.

const IV: [u64; 8] = [
    0x6a09e667f3bcc908,
    0xbb67ae8584caa73b,
    0x3c6ef372fe94f82b,
    0xa54ff53a5f1d36f1,
    0x510e527fade682d1,
    0x9b05688c2b3e6c1f,
    0x1f83d9abfb41bd6b,
    0x5be0cd19137e2179,
];

const U512: [u64; 16] = [
    0x243f6a8885a308d3,
    0x13198a2e03707344,
    0xa4093822299f31d0,
    0x082efa98ec4e6c89,
    0x452821e638d01377,
    0xbe5466cf34e90c6c,
    0xc0ac29b7c97c50dd,
    0x3f84d5b5b5470917,
    0x9216d5d98979fb1b,
    0xd1310ba698dfb5ac,
    0x2ffd72dbd01adfb7,
    0xb8e1afed6a267e96,
    0xba7c9045f12c7f99,
    0x24a19947b3916cf7,
    0x0801f2e2858efc16,
    0x636920d871574e69,
];

const SIGMA: [[usize; 16]; 10] = [
    [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15],
    [14, 10, 4, 8, 9, 15, 13, 6, 1, 12, 0, 2, 11, 7, 5, 3],
    [11, 8, 12, 0, 5, 2, 15, 13, 10, 14, 3, 6, 7, 1, 9, 4],
    [7, 9, 3, 1, 13, 12, 11, 14, 2, 6, 5, 10, 4, 0, 15, 8],
    [9, 0, 5, 7, 2, 4, 10, 15, 14, 1, 11, 12, 6, 8, 3, 13],
    [2, 12, 6, 10, 0, 11, 8, 3, 4, 13, 7, 5, 15, 14, 1, 9],
    [12, 5, 1, 15, 14, 13, 4, 10, 0, 7, 6, 3, 9, 2, 8, 11],
    [13, 11, 7, 14, 12, 1, 3, 9, 5, 0, 15, 4, 8, 6, 2, 10],
    [6, 15, 14, 9, 11, 3, 0, 8, 12, 2, 13, 7, 1, 4, 10, 5],
    [10, 2, 8, 4, 7, 6, 1, 5, 15, 11, 9, 14, 3, 12, 13, 0],
];

struct Blake512 {
    h: [u64; 8],
    block: [u8; 128],
    block_off: usize,
    /// Message bit counter, adjusted during padding so the compression of
    /// padding-only blocks sees zero (nullt) per the specification.
    length: u128,
    nullt: bool,
}

impl Blake512 {
    fn new() -> Self {
        Blake512 {
            h: IV,
            block: [0u8; 128],
            block_off: 0,
            length: 0,
            nullt: false,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn g(v: &mut [u64; 16], m: &[u64; 16], r: usize, a: usize, b: usize, c: usize, d: usize, e: usize) {
        let s = &SIGMA[r % 10];
        v[a] = v[a]
            .wrapping_add(m[s[e]] ^ U512[s[e + 1]])
            .wrapping_add(v[b]);
        v[d] = (v[d] ^ v[a]).rotate_right(32);
        v[c] = v[c].wrapping_add(v[d]);
        v[b] = (v[b] ^ v[c]).rotate_right(25);
        v[a] = v[a]
            .wrapping_add(m[s[e + 1]] ^ U512[s[e]])
            .wrapping_add(v[b]);
        v[d] = (v[d] ^ v[a]).rotate_right(16);
        v[c] = v[c].wrapping_add(v[d]);
        v[b] = (v[b] ^ v[c]).rotate_right(11);
    }

    fn compress(&mut self) {
        let mut m = [0u64; 16];
        for (i, w) in m.iter_mut().enumerate() {
            *w = u64::from_be_bytes(self.block[i * 8..i * 8 + 8].try_into().unwrap());
        }
        let mut v = [0u64; 16];
        v[..8].copy_from_slice(&self.h);
        v[8..].copy_from_slice(&U512[..8]);
        if !self.nullt {
            let lo = self.length as u64;
            let hi = (self.length >> 64) as u64;
            v[12] ^= lo;
            v[13] ^= lo;
            v[14] ^= hi;
            v[15] ^= hi;
        }
        for r in 0..16 {
            Self::g(&mut v, &m, r, 0, 4, 8, 12, 0);
            Self::g(&mut v, &m, r, 1, 5, 9, 13, 2);
            Self::g(&mut v, &m, r, 2, 6, 10, 14, 4);
            Self::g(&mut v, &m, r, 3, 7, 11, 15, 6);
            Self::g(&mut v, &m, r, 0, 5, 10, 15, 8);
            Self::g(&mut v, &m, r, 1, 6, 11, 12, 10);
            Self::g(&mut v, &m, r, 2, 7, 8, 13, 12);
            Self::g(&mut v, &m, r, 3, 4, 9, 14, 14);
        }
        for i in 0..8 {
            self.h[i] ^= v[i] ^ v[i + 8];
        }
    }

    fn update(&mut self, data: &[u8]) {
        let mut off = 0usize;
        while self.block_off + (data.len() - off) >= 128 {
            let take = 128 - self.block_off;
            self.block[self.block_off..].copy_from_slice(&data[off..off + take]);
            off += take;
            self.length = self.length.wrapping_add(1024);
            self.compress();
            self.block_off = 0;
        }
        self.block[self.block_off..self.block_off + (data.len() - off)]
            .copy_from_slice(&data[off..]);
        self.block_off += data.len() - off;
    }

    fn digest(mut self) -> [u8; 64] {
        let total_bits = self.length.wrapping_add((self.block_off as u128) * 8);
        let mut msglen = [0u8; 16];
        msglen.copy_from_slice(&total_bits.to_be_bytes());

        const PADDING: [u8; 129] = {
            let mut p = [0u8; 129];
            p[0] = 0x80;
            p
        };

        if self.block_off == 111 {
            self.length = self.length.wrapping_sub(8);
            self.update(&[0x81]);
        } else {
            if self.block_off < 111 {
                if self.block_off == 0 {
                    self.nullt = true;
                }
                self.length = self
                    .length
                    .wrapping_sub(((111 - self.block_off) as u128) * 8);
                let n = 111 - self.block_off;
                self.update(&PADDING[..n]);
            } else {
                self.length = self
                    .length
                    .wrapping_sub(((128 - self.block_off) as u128) * 8);
                let n = 128 - self.block_off;
                self.update(&PADDING[..n]);
                self.length = self.length.wrapping_sub(111 * 8);
                self.update(&PADDING[1..112]);
                self.nullt = true;
            }
            self.update(&[0x01]);
            self.length = self.length.wrapping_sub(8);
        }
        self.length = self.length.wrapping_sub(128);
        self.update(&msglen);

        let mut out = [0u8; 64];
        for (i, w) in self.h.iter().enumerate() {
            out[i * 8..i * 8 + 8].copy_from_slice(&w.to_be_bytes());
        }
        out
    }
}

/// One-shot BLAKE-512.
pub fn blake512(data: &[u8]) -> [u8; 64] {
    let mut st = Blake512::new();
    st.update(data);
    st.digest()
}

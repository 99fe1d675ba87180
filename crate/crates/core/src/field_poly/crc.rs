/// Name of the checksum recorded in vault headers.
pub const CRC_VARIANT: &str = "CRC-16/ARC";

const fn make_table() -> [u16; 256] {
    // 0xA001 is 0x8005 bit-reversed
    let mut table = [0u16; 256];
    let mut i = 0;
    while i < 256 {
        let mut crc = i as u16;
        let mut bit = 0;
        while bit < 8 {
            crc = if crc & 1 != 0 { (crc >> 1) ^ 0xA001 } else { crc >> 1 };
            bit += 1;
        }
        table[i] = crc;
        i += 1;
    }
    table
}

static TABLE: [u16; 256] = make_table();

/// CRC-16/ARC: polynomial 0x8005, zero init, reflected in and out, no final xor.
pub fn crc16(data: &[u8]) -> u16 {
    data.iter().fold(0u16, |crc, &b| {
        (crc >> 8) ^ TABLE[((crc ^ b as u16) & 0xff) as usize]
    })
}

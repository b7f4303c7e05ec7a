//! Coefficients of the squared dispersion polynomial
//! `P₇(λ) = a₀λ⁷ + a₁λ⁶ + … + a₇` as integer polynomials in `(m, ε)`.
//!
//! Each entry is `(c, i, j)` for the term `c·mⁱ·εʲ`. The tables are the
//! expanded closed forms, e.g. `a₀ = 2¹¹(ε−1)⁴ε²` and
//! `a₁ = −2¹¹(ε²−ε)²[(5ε²−2ε+1)m² + 2(ε+1)²m + 4]`; they are validated against
//! the squaring chain by `squared_form`.

pub(crate) type Term = (i64, u32, u32);

pub(crate) const A: [&[Term]; 8] = [
    &[
        (2048, 0, 6),
        (-8192, 0, 5),
        (12288, 0, 4),
        (-8192, 0, 3),
        (2048, 0, 2),
    ],
    &[
        (-10240, 2, 6),
        (24576, 2, 5),
        (-20480, 2, 4),
        (8192, 2, 3),
        (-2048, 2, 2),
        (-4096, 1, 6),
        (8192, 1, 4),
        (-4096, 1, 2),
        (-8192, 0, 4),
        (16384, 0, 3),
        (-8192, 0, 2),
    ],
    &[
        (15104, 4, 6),
        (-17408, 4, 5),
        (6656, 4, 4),
        (-5120, 4, 3),
        (768, 4, 2),
        (15360, 3, 6),
        (2048, 3, 4),
        (-16384, 3, 3),
        (-1024, 3, 2),
        (1024, 2, 6),
        (10240, 2, 5),
        (12288, 2, 4),
        (-12288, 2, 3),
        (-9216, 2, 2),
        (-2048, 2, 1),
        (-4096, 1, 5),
        (10240, 1, 4),
        (2048, 1, 3),
        (-2048, 1, 2),
        (-6144, 1, 1),
        (-2048, 0, 4),
        (6144, 0, 2),
        (-4096, 0, 1),
    ],
    &[
        (-5760, 6, 6),
        (512, 6, 5),
        (-4352, 6, 4),
        (1536, 6, 3),
        (-128, 6, 2),
        (-15104, 5, 6),
        (2048, 5, 5),
        (-18944, 5, 4),
        (-2048, 5, 3),
        (1280, 5, 2),
        (-2048, 4, 6),
        (-13824, 4, 5),
        (-12288, 4, 4),
        (-18944, 4, 3),
        (-3072, 4, 2),
        (1024, 4, 1),
        (2048, 3, 6),
        (10240, 3, 5),
        (-15872, 3, 4),
        (-11776, 3, 3),
        (-16896, 3, 2),
        (-512, 3, 1),
        (4608, 2, 5),
        (13824, 2, 4),
        (-7680, 2, 3),
        (-12288, 2, 2),
        (-6144, 2, 1),
        (-512, 2, 0),
        (512, 1, 4),
        (8704, 1, 3),
        (-3584, 1, 2),
        (-4608, 1, 1),
        (-1024, 1, 0),
        (-1024, 0, 3),
        (1536, 0, 2),
        (-512, 0, 0),
    ],
    &[
        (648, 8, 6),
        (-1440, 8, 5),
        (944, 8, 4),
        (-160, 8, 3),
        (8, 8, 2),
        (2880, 7, 6),
        (-2560, 7, 5),
        (-1664, 7, 4),
        (1536, 7, 3),
        (-192, 7, 2),
        (1344, 6, 6),
        (-3712, 6, 5),
        (-5376, 6, 4),
        (-2048, 6, 3),
        (1728, 6, 2),
        (-128, 6, 1),
        (-4352, 5, 6),
        (-5376, 5, 5),
        (-14464, 5, 4),
        (-10368, 5, 3),
        (896, 5, 2),
        (896, 5, 1),
        (-896, 4, 6),
        (-12288, 4, 5),
        (-9600, 4, 4),
        (-22528, 4, 3),
        (-5376, 4, 2),
        (1280, 4, 1),
        (256, 4, 0),
        (768, 3, 5),
        (-9600, 3, 4),
        (-8320, 3, 3),
        (-14976, 3, 2),
        (-640, 3, 1),
        (3712, 2, 4),
        (-896, 2, 3),
        (-6144, 2, 2),
        (-3968, 2, 1),
        (-896, 2, 0),
        (1792, 1, 3),
        (1792, 1, 2),
        (-2816, 1, 1),
        (-768, 1, 0),
        (-128, 0, 2),
        (256, 0, 1),
        (-128, 0, 0),
    ],
    &[
        (288, 8, 6),
        (-544, 8, 5),
        (160, 8, 4),
        (160, 8, 3),
        (-64, 8, 2),
        (1216, 7, 6),
        (256, 7, 5),
        (-2720, 7, 4),
        (1248, 7, 3),
        (96, 7, 2),
        (-96, 7, 1),
        (1152, 6, 6),
        (1056, 6, 5),
        (-3936, 6, 4),
        (-3040, 6, 3),
        (1728, 6, 2),
        (-32, 6, 0),
        (-256, 5, 6),
        (256, 5, 5),
        (-5408, 5, 4),
        (-7456, 5, 3),
        (-800, 5, 2),
        (1312, 5, 1),
        (64, 5, 0),
        (-1920, 4, 5),
        (-3520, 4, 4),
        (-10240, 4, 3),
        (-4128, 4, 2),
        (704, 4, 1),
        (672, 4, 0),
        (-2048, 3, 4),
        (-4736, 3, 3),
        (-5248, 3, 2),
        (-896, 3, 1),
        (640, 3, 0),
        (256, 2, 3),
        (-2368, 2, 2),
        (-640, 2, 1),
        (-320, 2, 0),
        (640, 1, 2),
        (-256, 1, 1),
        (-384, 1, 0),
    ],
    &[
        (32, 8, 6),
        (-48, 8, 5),
        (-16, 8, 4),
        (48, 8, 3),
        (-16, 8, 2),
        (128, 7, 6),
        (336, 7, 5),
        (-616, 7, 4),
        (72, 7, 3),
        (104, 7, 2),
        (-24, 7, 1),
        (128, 6, 6),
        (576, 6, 5),
        (-312, 6, 4),
        (-1368, 6, 3),
        (336, 6, 2),
        (136, 6, 1),
        (-8, 6, 0),
        (320, 5, 5),
        (-192, 5, 4),
        (-1808, 5, 3),
        (-1104, 5, 2),
        (656, 5, 1),
        (80, 5, 0),
        (-288, 4, 4),
        (-1440, 4, 3),
        (-1928, 4, 2),
        (176, 4, 1),
        (408, 4, 0),
        (-896, 3, 3),
        (-992, 3, 2),
        (-640, 3, 1),
        (480, 3, 0),
        (-352, 2, 2),
        (-256, 2, 1),
        (96, 2, 0),
        (64, 1, 1),
        (-64, 1, 0),
    ],
    &[
        (32, 7, 5),
        (-16, 7, 4),
        (-32, 7, 3),
        (16, 7, 2),
        (32, 6, 5),
        (80, 6, 4),
        (-176, 6, 3),
        (32, 6, 1),
        (96, 5, 4),
        (-112, 5, 3),
        (-224, 5, 2),
        (96, 5, 1),
        (16, 5, 0),
        (32, 4, 3),
        (-304, 4, 2),
        (16, 4, 1),
        (64, 4, 0),
        (-96, 3, 2),
        (-112, 3, 1),
        (80, 3, 0),
        (-64, 2, 1),
        (32, 2, 0),
    ],
];

// Frozen from oracles/tests_oracle.py.

pub type Pair = (&'static [f64], &'static [f64], f64, f64);

pub const KS_VECTORS: &[Pair] = &[
    (&[0.1, 0.2, 0.3, 0.4], &[0.25, 0.25, 0.25, 0.25], 0.19999999999999996, 0.9999982209908774),
    (&[0.087, 0.23, 0.31, 0.112, 0.167, 0.094], &[0.1, 0.2, 0.3, 0.1, 0.2, 0.1], 0.039000000000000146, 1.0),
    (&[5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 5.0], &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0], 0.4, 0.40047103620845764),
    (&[3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0, 5.0, 8.0, 9.0, 7.0, 9.0, 3.0, 2.0, 3.0, 8.0, 4.0], &[2.0, 7.0, 1.0, 8.0, 2.0, 8.0, 1.0, 8.0, 2.0, 8.0, 4.0, 5.0, 9.0, 0.0, 4.0, 5.0, 2.0, 3.0, 5.0, 3.0], 0.13816802938736822, 0.9910444436687366),
    (&[0.0, 0.0, 0.0, 1.0], &[1.0, 0.0, 0.0, 0.0], 1.0, 0.03663105270711935),
];

pub const KS_SAMPLES: &[Pair] = &[
    (&[0.311552, -1.65863, 1.600922, 0.958505, 0.885949, -2.63182, -0.748771, 0.114387, -1.436092, -0.890149, 0.024329, 2.578818, -1.327459, -1.828804, 0.207414, -1.684727, -1.537149, 0.999725, 0.088296, 1.918447, -0.915813, -0.560735, 0.158464, -1.041715, 0.083302, 1.410187, -0.110344, -0.788094, 0.682379, -1.394208, 1.20209, 0.2927, 1.492786, -0.468831, 0.991719, -0.592517, -0.295431, -1.054625, 1.061092, 0.799096], &[-1.257515, -0.2147, 1.136767, 0.616419, -0.802338, -0.532823, 0.56745, 0.066552, 1.935833, -0.343565, 1.034705, -0.028283, -1.040262, 0.77045, 1.655773, 1.649779, -1.958954, -0.426145, 0.130865, -0.488382, 2.05982, 0.302637, 0.500502, -1.298693, 0.912794, 0.872777, 0.247815, 1.035959, -0.182476, 0.658749, 0.387263, 1.329065, -1.284536, -0.781512, 1.575383, 0.52392, 0.604978, 0.313052, -0.680756, 0.961429, 1.742445, 0.907218, -0.141845, -1.319368, 1.534984, 0.493556, 1.07907, -0.794698, 0.638404, 0.404297, 0.639866, 0.915368, -0.417204, -0.249016, 0.682374], 0.23863636363636365, 0.1430188603601198),
    (&[0.684939, 0.886596, 1.036575, 1.60799, 3.28686, 0.170195, 1.731973, 0.713534, 1.10927, 2.40571, 0.965488, 0.549964, 0.831461, 0.706731, 1.514663, 1.014627, 0.339341, 0.533576, 2.402588, 1.318193, 0.796354, 0.131795, 2.338872, 0.512713, 0.362371, 1.780169, 0.190057, 0.042037, 2.09046, 0.116597], &[4.105847, 0.332638, 3.040009, 0.640941, 1.787956, 2.977149, 1.771793, 3.773998, 3.32006, 2.326597, 1.645044, 0.808651, 0.237134, 0.976879, 0.374098, 2.814897, 0.186848, 0.474898, 0.634288, 2.148563, 0.039612, 1.033507, 0.601654, 0.512514, 0.624511, 0.795912, 0.514232, 1.882443, 1.674351, 2.081452], 0.23333333333333334, 0.38764765032522475),
];

pub const WELCH: &[Pair] = &[
    (&[19.1, 20.3, 21.7, 18.4, 22.0, 20.9, 19.8], &[24.2, 22.1, 23.9, 25.0, 21.8, 24.4], -4.448025025392301, 0.0010407207457209056),
    (&[1.0, 2.0, 3.0, 4.0, 5.0], &[1.0, 2.0, 3.0, 4.0, 5.0], 0.0, 1.0),
    (&[27.5, 21.0, 19.0, 23.6, 17.0, 17.9, 16.9, 20.1, 21.9, 22.6, 23.1, 19.6, 19.0, 21.7, 21.4], &[27.1, 22.0, 20.8, 23.4, 23.4, 23.5, 25.8, 22.0, 24.8, 20.2, 21.9, 22.1, 22.9, 20.5, 24.4], -2.455356398286006, 0.021378001462866985),
    (&[0.5, 0.5, 0.5], &[0.1, 0.9, 0.4, 0.7], -0.14285714285714235, 0.8954583338276435),
    (&[102.0, 98.5, 110.2, 95.1, 101.7, 99.9, 104.4, 97.3, 100.8, 103.6, 96.2], &[88.0, 121.5, 79.3, 132.8, 101.1], -0.3620307081436265, 0.7350822849295863),
];

pub const ANOVA: &[(&[&[f64]], f64, f64)] = &[
    (&[&[6.0, 8.0, 4.0, 5.0, 3.0, 4.0], &[8.0, 12.0, 9.0, 11.0, 6.0, 8.0], &[13.0, 9.0, 11.0, 8.0, 7.0, 12.0]], 9.264705882352942, 0.0023987773293929083),
    (&[&[4.17, 5.58, 5.18, 6.11, 4.5, 4.61, 5.17, 4.53, 5.33, 5.14], &[4.81, 4.17, 4.41, 3.59, 5.87, 3.83, 6.03, 4.89, 4.32, 4.69], &[6.31, 5.12, 5.54, 5.5, 5.37, 5.29, 4.92, 6.15, 5.8, 5.26]], 4.846087862380136, 0.0159099583256229),
    (&[&[1.0, 2.0, 3.0], &[1.5, 2.5, 3.5, 2.0]], 0.28784648187633266, 0.6146055989189662),
    (&[&[10.2, 11.1, 9.8, 10.5], &[10.0, 10.9, 10.3, 9.7, 10.6], &[10.4, 9.9, 10.8], &[10.1, 10.2, 10.7, 9.6]], 0.20355029585798923, 0.891951845778185),
    (&[&[370.0, 380.5, 361.2, 395.4, 372.8], &[449.5, 431.0, 462.3, 455.9], &[401.2, 410.8, 398.3, 415.0, 405.5, 399.9]], 50.90832085733264, 1.3735765680068654e-06),
];

pub const SUMMARY: (&[f64], f64, f64) = (&[2.5, 3.75, 1.125, 9.0, 4.4, 6.02, 7.7], 4.9278571428571425, 2.813126755561708);

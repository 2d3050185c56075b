//! Critical-value tables printed alongside the original method description,
//! shipped verbatim for self-checks. Rows are `[N, λ = 0.05, λ = 0.01]`.

/// Three-option scale (`p = 1/3`).
pub const SCALE3_REFERENCE: [[u64; 3]; 96] = [
    [5, 5, 5],
    [6, 5, 6],
    [7, 5, 6],
    [8, 6, 7],
    [9, 6, 7],
    [10, 7, 8],
    [11, 7, 8],
    [12, 7, 9],
    [13, 8, 9],
    [14, 8, 10],
    [15, 9, 10],
    [16, 9, 11],
    [17, 9, 11],
    [18, 10, 12],
    [19, 10, 12],
    [20, 11, 12],
    [21, 11, 13],
    [22, 11, 13],
    [23, 12, 14],
    [24, 12, 14],
    [25, 13, 15],
    [26, 13, 15],
    [27, 13, 15],
    [28, 14, 16],
    [29, 14, 16],
    [30, 14, 17],
    [31, 15, 17],
    [32, 15, 17],
    [33, 15, 18],
    [34, 16, 18],
    [35, 16, 19],
    [36, 17, 19],
    [37, 17, 20],
    [38, 17, 20],
    [39, 18, 20],
    [40, 18, 21],
    [41, 18, 21],
    [42, 19, 22],
    [43, 19, 22],
    [44, 19, 22],
    [45, 20, 23],
    [46, 20, 23],
    [47, 20, 24],
    [48, 21, 24],
    [49, 21, 24],
    [50, 22, 25],
    [51, 22, 25],
    [52, 22, 25],
    [53, 23, 26],
    [54, 23, 26],
    [55, 23, 27],
    [56, 24, 27],
    [57, 24, 27],
    [58, 24, 28],
    [59, 25, 28],
    [60, 25, 29],
    [61, 25, 29],
    [62, 26, 29],
    [63, 26, 30],
    [64, 26, 30],
    [65, 27, 31],
    [66, 27, 31],
    [67, 27, 31],
    [68, 28, 32],
    [69, 28, 32],
    [70, 28, 32],
    [71, 29, 33],
    [72, 29, 33],
    [73, 29, 34],
    [74, 30, 34],
    [75, 30, 34],
    [76, 30, 35],
    [77, 31, 35],
    [78, 31, 35],
    [79, 32, 36],
    [80, 32, 36],
    [81, 32, 37],
    [82, 33, 37],
    [83, 33, 37],
    [84, 33, 38],
    [85, 34, 38],
    [86, 34, 38],
    [87, 34, 39],
    [88, 35, 39],
    [89, 35, 40],
    [90, 35, 40],
    [91, 36, 40],
    [92, 36, 41],
    [93, 36, 41],
    [94, 37, 41],
    [95, 37, 42],
    [96, 37, 42],
    [97, 38, 43],
    [98, 38, 43],
    [99, 38, 43],
    [100, 39, 44],
];

/// Four-option scale (`p = 1/4`).
pub const SCALE4_REFERENCE: [[u64; 3]; 96] = [
    [5, 5, 5],
    [6, 5, 5],
    [7, 5, 6],
    [8, 5, 6],
    [9, 5, 6],
    [10, 6, 7],
    [11, 6, 7],
    [12, 6, 8],
    [13, 7, 8],
    [14, 7, 8],
    [15, 7, 9],
    [16, 8, 9],
    [17, 8, 9],
    [18, 8, 10],
    [19, 8, 10],
    [20, 9, 10],
    [21, 9, 11],
    [22, 9, 11],
    [23, 10, 12],
    [24, 10, 12],
    [25, 10, 12],
    [26, 11, 13],
    [27, 11, 13],
    [28, 11, 13],
    [29, 11, 14],
    [30, 12, 14],
    [31, 12, 14],
    [32, 12, 14],
    [33, 13, 15],
    [34, 13, 15],
    [35, 13, 15],
    [36, 13, 16],
    [37, 14, 16],
    [38, 14, 16],
    [39, 14, 17],
    [40, 14, 17],
    [41, 15, 17],
    [42, 15, 18],
    [43, 15, 18],
    [44, 16, 18],
    [45, 16, 19],
    [46, 16, 19],
    [47, 16, 19],
    [48, 17, 19],
    [49, 17, 20],
    [50, 17, 20],
    [51, 17, 20],
    [52, 18, 21],
    [53, 18, 21],
    [54, 18, 21],
    [55, 18, 22],
    [56, 19, 22],
    [57, 19, 22],
    [58, 19, 23],
    [59, 20, 23],
    [60, 20, 23],
    [61, 20, 23],
    [62, 20, 24],
    [63, 21, 24],
    [64, 21, 24],
    [65, 21, 25],
    [66, 21, 25],
    [67, 22, 25],
    [68, 22, 25],
    [69, 22, 26],
    [70, 22, 26],
    [71, 23, 26],
    [72, 23, 27],
    [73, 23, 27],
    [74, 23, 27],
    [75, 24, 28],
    [76, 24, 28],
    [77, 24, 28],
    [78, 25, 28],
    [79, 25, 29],
    [80, 25, 29],
    [81, 25, 29],
    [82, 26, 30],
    [83, 26, 30],
    [84, 26, 30],
    [85, 26, 30],
    [86, 27, 31],
    [87, 27, 31],
    [88, 27, 31],
    [89, 27, 32],
    [90, 28, 32],
    [91, 28, 32],
    [92, 28, 32],
    [93, 28, 33],
    [94, 29, 33],
    [95, 29, 33],
    [96, 29, 34],
    [97, 29, 34],
    [98, 30, 34],
    [99, 30, 34],
    [100, 30, 35],
];

/// Method comparison rows: `[N, p=1/3 λ=0.05, p=1/3 λ=0.01, p=1/4 λ=0.05,
/// p=1/4 λ=0.01, normal approximation, exact binomial p=1/2]`.
pub const COMPARISON_REFERENCE: [[u64; 7]; 36] = [
    [5, 5, 5, 5, 5, 4, 5],
    [6, 5, 6, 5, 5, 5, 6],
    [7, 5, 6, 5, 6, 6, 7],
    [8, 6, 7, 5, 6, 6, 7],
    [9, 6, 7, 5, 6, 7, 8],
    [10, 7, 8, 6, 7, 8, 9],
    [11, 7, 8, 6, 7, 8, 9],
    [12, 7, 9, 6, 8, 9, 10],
    [13, 8, 9, 7, 8, 9, 10],
    [14, 8, 10, 7, 8, 10, 11],
    [15, 9, 10, 7, 9, 11, 12],
    [16, 9, 11, 8, 9, 11, 12],
    [17, 9, 11, 8, 9, 12, 13],
    [18, 10, 12, 8, 10, 12, 13],
    [19, 10, 12, 8, 10, 13, 14],
    [20, 11, 12, 9, 10, 14, 15],
    [21, 11, 13, 9, 11, 14, 15],
    [22, 11, 13, 9, 11, 15, 16],
    [23, 12, 14, 10, 12, 15, 16],
    [24, 12, 14, 10, 12, 16, 17],
    [25, 13, 15, 10, 12, 17, 18],
    [26, 13, 15, 11, 13, 17, 18],
    [27, 13, 15, 11, 13, 18, 19],
    [28, 14, 16, 11, 13, 18, 19],
    [29, 14, 16, 11, 14, 19, 20],
    [30, 14, 17, 12, 14, 19, 20],
    [31, 15, 17, 12, 14, 20, 21],
    [32, 15, 17, 12, 14, 21, 22],
    [33, 15, 18, 13, 15, 21, 22],
    [34, 16, 18, 13, 15, 22, 23],
    [35, 16, 19, 13, 15, 22, 23],
    [36, 17, 19, 13, 16, 23, 24],
    [37, 17, 20, 14, 16, 23, 24],
    [38, 17, 20, 14, 16, 24, 25],
    [39, 18, 20, 14, 17, 25, 26],
    [40, 18, 21, 14, 17, 25, 26],
];

// (sigma, t, mu, re, im): mpmath.zeta(sigma + t*j, derivative=mu) at 30 digits.
const REFERENCE: [(f64, f64, usize, f64, f64); 27] = [
    (0.5, 14.0, 0, 0.02224114260999359, -0.10325812326645006),
    (0.5, 14.0, 3, 0.41525999986497447, 0.36147801482917535),
    (0.5, 100.0, 0, 2.692619885681324, -0.020386029602598162),
    (0.5, 100.0, 1, -3.7273127096446483, -0.19422870257374322),
    (0.5, 100.0, 2, 9.554155226630616, 0.5567079426041646),
    (0.5, 100.0, 5, -182.87527866107848, -6.17771614537501),
    (0.5, 100.0, 8, 3645.099999568151, 136.02406906758284),
    (-0.9, 7.0, 0, 0.9309078377850851, 0.7865206914978626),
    (-0.9, 7.0, 2, -0.1511411246846791, 0.11272636329916669),
    (1.9, 0.5, 0, 1.4890332145123357, -0.4399307396817809),
    (1.9, 0.5, 6, -538.9478058053936, 233.02527748800136),
    (0.2, -30.0, 1, 2.408720035054272, -0.02066896951019689),
    (0.5, 1000.0, 0, 0.35633436719439604, 0.9319978312329936),
    (0.5, 1000.0, 4, -522.5353937473137, 360.73288243179167),
    (0.7, 500.0, 3, 41.45752723531834, 1.9612087445962427),
    (0.5, 5000.0, 0, 0.40684271363543256, -0.6937641591980851),
    (0.5, 5000.0, 2, -9.035415909124602, -24.437623361102098),
    (-0.5, 2000.0, 0, 213.94229628702644, -41.85298219718333),
    (1.5, 20000.0, 1, -0.19851933532602783, 0.12245329429673561),
    (0.5, 45000.0, 0, 0.15434537246618926, -0.844005423648075),
    (0.5, 45000.0, 3, 227.42771005756106, 363.0073619770426),
    (1.2, 0.3, 12, 269192272801588.88, -57361605572415.48),
    (0.0, 0.0, 0, -0.5, 0.0),
    (0.5, 0.0, 1, -3.9226461392091516, 0.0),
    (1.1, 0.0, 2, 1999.990115747038, 0.0),
    (2.0, 0.0, 0, 1.6449340668482264, 0.0),
    (2.0, 10.0, 1, -0.13543269333308647, 0.03319744231612998),
];

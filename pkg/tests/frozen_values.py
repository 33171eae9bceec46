"""Frozen oracle values; regenerate with tests/oracles/generate_frozen.py.

Link: alpha=2.1, beta=3.5, C=0.6, gbar1=gbar2=10 unless the key says otherwise.
"""

FROZEN = {
    "norm_xi1": 1.0,
    "cdf_xi1_g0.5": 0.23326662784743379,
    "cdf_xi1_g5": 0.65873939378145351,
    "cdf_xi1_g30": 0.9844080019663479,
    "mgf_xi1_s0.1": 0.69114762097246417,
    "mgf_xi1_s1": 0.28503242287731244,
    "mgf_xi1_s10": 0.095282798562043386,
    "moment_xi1_n1": 5.3337115983179958,
    "moment_xi1_n2": 81.453084201840669,
    "moment_xi1_n3": 2034.744532072232,
    "ber_cbfsk_xi1": 0.12704463958292486,
    "ber_cbpsk_xi1": 0.092296990201053396,
    "ber_nbfsk_xi1": 0.19428213148384741,
    "ber_dbpsk_xi1": 0.14251621143865622,
    "norm_xi6.7": 1.0,
    "cdf_xi6.7_g0.5": 0.087913000935439605,
    "cdf_xi6.7_g5": 0.50143977499369277,
    "cdf_xi6.7_g30": 0.97115228260071967,
    "mgf_xi6.7_s0.1": 0.57659954766479707,
    "mgf_xi6.7_s1": 0.14075907237462421,
    "mgf_xi6.7_s10": 0.021026344672591181,
    "moment_xi6.7_n1": 7.8080184846031787,
    "moment_xi6.7_n2": 134.69940779621323,
    "moment_xi6.7_n3": 3614.5017801254414,
    "ber_cbfsk_xi6.7": 0.06499535172212088,
    "ber_cbpsk_xi6.7": 0.038216168555808162,
    "ber_nbfsk_xi6.7": 0.11698774035253616,
    "ber_dbpsk_xi6.7": 0.070379536187312106,
    "norm_xiinf": 1.0,
    "cdf_xiinf_g0.5": 0.086681762738956849,
    "cdf_xiinf_g5": 0.49876436056456684,
    "cdf_xiinf_g30": 0.97078108300219719,
    "mgf_xiinf_s0.1": 0.57474489256328006,
    "mgf_xiinf_s1": 0.13929921176891304,
    "mgf_xiinf_s10": 0.020646904524997423,
    "moment_xiinf_n1": 7.8558263747699204,
    "moment_xiinf_n2": 135.96615006623908,
    "moment_xiinf_n3": 3656.9037374722289,
    "ber_cbfsk_xiinf": 0.064375716796436653,
    "ber_cbpsk_xiinf": 0.03776140483182422,
    "ber_nbfsk_xiinf": 0.11605811366347956,
    "ber_dbpsk_xiinf": 0.069649605884456522,
    "capacity_xi1_g10": 1.94336491608942,
    "capacity_xi1_g15": 2.4506953659348482,
    "capacity_xi6.7_g10": 2.5450284217950328,
    "capacity_xi6.7_g15": 3.0765625636063779,
    "capacity_xiinf_g10": 2.5539578596942086,
    "capacity_xiinf_g15": 3.0846917959486438,
    "g6_kappa_xi1_z0.37": 0.68925266065612773,
    "g3_eq1_kernel_xi2_z1.3": 0.16537188032554062,
    "loggamma_3p4i_re": -1.7566267846037841,
    "loggamma_3p4i_im": 4.7426644380346579,
    "loggamma_m2.5p0.1i_re": -0.1031492440428192,
    "loggamma_m2.5p0.1i_im": -9.3144442683598381,
    "upper_gamma_0.5_1": 0.27880558528066198,
    "upper_gamma_2.5_7": 0.020750227257978492,
}

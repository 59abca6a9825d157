from .formats import (
    complex_from_json,
    complex_to_json,
    decomposition_from_json,
    decomposition_to_json,
    read_complex_matrix_csv,
    read_dense_csv,
    read_graph,
    read_matrix_market,
    read_signal_csv,
    write_complex_matrix_csv,
    write_coordinates_csv,
    write_correlation,
    write_dense_csv,
    write_json,
    write_matrix_market,
    write_signal_csv,
)
from .generators import (
    add_noise,
    box_muller,
    cyclic_graph,
    derived_seed,
    directed_subsample,
    exp_weight,
    exp_weighted_graph,
    k_sparse_signal,
    knn_sensor_graph,
    make_rng,
    sigma_for_snr,
    signal_power,
    snr_db,
    splitmix64,
)

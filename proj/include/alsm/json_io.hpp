#ifndef ALSM_JSON_IO_HPP
#define ALSM_JSON_IO_HPP

#include <json.hpp>

#include "alsm/modelsel.hpp"

namespace alsm {

// {"model": "se-al", "mu": ..., "beta": ..., "kappa": ..., "theta": [...]}
// theta has length 2 for tp-al, 1 for the other mixing families, and
// is empty for the plain "al".
nlohmann::json params_to_json(const ALParams& al,
                              const std::optional<MixingLaw>& mixing);
std::pair<ALParams, std::optional<MixingLaw>> params_from_json(
    const nlohmann::json& j);

// {"model", "params": {...}, "loglik", "n_iter", "converged", "trace": [...]}
nlohmann::json fit_result_to_json(const FitResult& r);

nlohmann::json comparison_to_json(const std::vector<ModelScore>& rows);

}  // namespace alsm

#endif

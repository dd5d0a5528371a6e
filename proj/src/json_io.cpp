#include "alsm/json_io.hpp"

#include <stdexcept>

namespace alsm {

using nlohmann::json;

json params_to_json(const ALParams& al,
                    const std::optional<MixingLaw>& mixing) {
  json j;
  j["model"] = mixing ? family_tag(mixing->family) : "al";
  j["mu"] = al.mu;
  j["beta"] = al.beta;
  j["kappa"] = al.kappa;
  json theta = json::array();
  if (mixing) {
    theta.push_back(mixing->theta1);
    if (mixing->family == Family::TwoPoint) theta.push_back(mixing->theta2);
  }
  j["theta"] = theta;
  return j;
}

std::pair<ALParams, std::optional<MixingLaw>> params_from_json(const json& j) {
  ALParams al{j.at("mu").get<double>(), j.at("beta").get<double>(),
              j.at("kappa").get<double>()};
  al.validate();
  const std::string tag = j.at("model").get<std::string>();
  if (tag == "al") return {al, std::nullopt};
  const auto fam = family_from_tag(tag);
  if (!fam) throw std::invalid_argument("unknown model tag: " + tag);
  const auto& theta = j.at("theta");
  if (*fam == Family::TwoPoint) {
    if (theta.size() != 2)
      throw std::invalid_argument("tp-al needs theta of length 2");
    return {al, MixingLaw::two_point(theta[0].get<double>(),
                                     theta[1].get<double>())};
  }
  if (theta.size() != 1)
    throw std::invalid_argument(tag + " needs theta of length 1");
  return {al, MixingLaw::make(*fam, theta[0].get<double>())};
}

json fit_result_to_json(const FitResult& r) {
  json j;
  j["model"] = r.model_tag();
  j["params"] = params_to_json(r.al, r.mixing);
  j["loglik"] = r.loglik;
  j["n_iter"] = r.n_iter;
  j["converged"] = r.converged;
  j["trace"] = r.loglik_trace;
  return j;
}

json comparison_to_json(const std::vector<ModelScore>& rows) {
  json arr = json::array();
  for (const ModelScore& r : rows) {
    json j;
    j["model"] = r.model;
    if (!r.error.empty()) {
      j["error"] = r.error;
      arr.push_back(j);
      continue;
    }
    j["k"] = r.k;
    j["loglik"] = r.loglik;
    j["aic"] = r.aic;
    j["bic"] = r.bic;
    j["rank_aic"] = r.rank_aic ? json(*r.rank_aic) : json();
    j["rank_bic"] = r.rank_bic ? json(*r.rank_bic) : json();
    j["lr_stat"] = r.lr_stat ? json(*r.lr_stat) : json();
    j["lr_df"] = r.lr_df ? json(*r.lr_df) : json();
    j["lr_pvalue"] = r.lr_pvalue ? json(*r.lr_pvalue) : json();
    if (r.fit) j["params"] = params_to_json(r.fit->al, r.fit->mixing);
    arr.push_back(j);
  }
  return arr;
}

}  // namespace alsm

// Copyright 2026 The relaysim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "relaysim/beamforming.hpp"
#include "relaysim/channel.hpp"
#include "relaysim/engine.hpp"
#include "relaysim/errors.hpp"
#include "relaysim/experiment.hpp"
#include "relaysim/rng.hpp"
#include "relaysim/selection.hpp"

namespace py = pybind11;
using namespace relaysim;

namespace {

using CVec = std::vector<std::complex<double>>;
using CMat = std::vector<CVec>;

ComplexVector to_vector(const CVec& v) { return ComplexVector(v); }

ComplexMatrix to_matrix(const CMat& rows) {
  const std::size_t m = rows.size();
  ComplexMatrix h(m, rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < m; ++r) {
    if (rows[r].size() != h.cols()) throw DimensionError("ragged matrix");
    for (std::size_t c = 0; c < h.cols(); ++c) h(r, c) = rows[r][c];
  }
  return h;
}

CVec from_vector(const ComplexVector& v) { return CVec(v.begin(), v.end()); }

CMat from_matrix(const ComplexMatrix& h) {
  CMat out(h.rows(), CVec(h.cols()));
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (std::size_t c = 0; c < h.cols(); ++c) out[r][c] = h(r, c);
  return out;
}

py::dict result_dict(const BeamformerResult& r) {
  py::dict d;
  d["u"] = from_vector(r.u);
  d["w"] = from_vector(r.w);
  d["gamma_s"] = r.gamma_s;
  d["gamma_d"] = r.gamma_d;
  d["iterations"] = r.iterations;
  d["beta"] = r.beta;
  return d;
}

py::dict beamform(const std::string& scheme, const CVec& h_s, const CVec& h_d, const CMat& h_rr,
                  double rho_s, double rho_r, double alpha, std::uint64_t seed) {
  const ComplexVector hs = to_vector(h_s);
  const ComplexVector hd = to_vector(h_d);
  const ComplexMatrix h = to_matrix(h_rr);
  const PairChannel ch{hs, hd, h, rho_s, rho_r};
  if (scheme == "optimal") return result_dict(bf_optimal(ch, alpha));
  if (scheme == "zf") return result_dict(bf_zf(ch));
  if (scheme == "mmse") return result_dict(bf_mmse(ch));
  if (scheme == "iri_free") return result_dict(bf_iri_free(ch));
  if (scheme == "ob") {
    Rng rng(seed, {stream::kOrthonormalBasis});
    return result_dict(bf_ob(ch, rng));
  }
  throw py::value_error("unknown beamformer '" + scheme +
                        "' (expected optimal, zf, mmse, iri_free, ob)");
}

py::dict draw_channel(const NetworkConfig& config, std::uint64_t slot) {
  config.validate();
  Rng rng(config.seed, {stream::kEpisodeChannel, slot});
  const ChannelRealization chan = draw(config, rng);
  py::list hs, hd;
  for (const auto& v : chan.source_to_relay) hs.append(from_vector(v));
  for (const auto& v : chan.relay_to_destination) hd.append(from_vector(v));
  py::dict inter;
  for (int j = 0; j < chan.relays; ++j)
    for (int i = 0; i < chan.relays; ++i)
      if (i != j) inter[py::make_tuple(j, i)] = from_matrix(chan.inter(j, i));
  py::dict d;
  d["h_s"] = hs;
  d["h_d"] = hd;
  d["h_rr"] = inter;
  return d;
}

py::dict metrics_dict(const EpisodeMetrics& m) {
  py::dict d;
  d["slots"] = m.slots;
  d["avg_rate_d"] = m.avg_rate_d;
  d["avg_rate_s"] = m.avg_rate_s;
  d["avg_delay"] = m.avg_delay;
  d["delay_applicable"] = m.delay_applicable;
  d["packets"] = m.packets;
  d["completed_packets"] = m.completed_packets;
  d["residual_bits"] = m.residual_bits;
  d["max_conservation_error"] = m.max_conservation_error;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Relay selection and beamforming simulator core";
  m.attr("__version__") = version();

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UnsupportedConfigurationError>(m, "UnsupportedConfigurationError",
                                                        PyExc_ValueError);
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ArithmeticError);

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init<>())
      .def_static("iid", &NetworkConfig::iid, py::arg("relays"), py::arg("antennas"),
                  py::arg("snr_db"), py::arg("var_rr_db") = 0.0, py::arg("var_link_db") = 0.0)
      .def_readwrite("relays", &NetworkConfig::relays)
      .def_readwrite("antennas", &NetworkConfig::antennas)
      .def_readwrite("rho_s", &NetworkConfig::rho_s)
      .def_readwrite("rho_r", &NetworkConfig::rho_r)
      .def_readwrite("var_sr", &NetworkConfig::var_sr)
      .def_readwrite("var_rd", &NetworkConfig::var_rd)
      .def_readwrite("var_rr", &NetworkConfig::var_rr)
      .def_readwrite("buffer_max", &NetworkConfig::buffer_max)
      .def_readwrite("seed", &NetworkConfig::seed)
      .def("validate", &NetworkConfig::validate);

  m.def("schemes", [] {
    std::vector<std::string> names;
    for (Scheme s : all_schemes()) names.emplace_back(scheme_name(s));
    return names;
  });

  m.def("beamform", &beamform, py::arg("scheme"), py::arg("h_s"), py::arg("h_d"), py::arg("h_rr"),
        py::arg("rho_s"), py::arg("rho_r"), py::arg("alpha") = 0.5, py::arg("seed") = 0,
        "Beamformer pair for one (receiving, transmitting) relay pair.");

  m.def("draw_channel", &draw_channel, py::arg("config"), py::arg("slot") = 0,
        "Channel realization of one data-phase slot.");

  m.def(
      "run_pretraining",
      [](const std::string& scheme, const NetworkConfig& config, const std::string& mode,
         int slots) {
        const AlphaMode am = parse_alpha_mode(mode);
        py::gil_scoped_release release;
        return run_pretraining(parse_scheme(scheme), config, am, slots).trained(am);
      },
      py::arg("scheme"), py::arg("config"), py::arg("alpha_mode") = "backpressure",
      py::arg("slots") = 5000, "Trained per-relay alpha weights.");

  m.def(
      "run_episode",
      [](const std::string& scheme, const NetworkConfig& config,
         std::optional<std::vector<double>> alpha, int slots) {
        const std::vector<double> a =
            alpha.value_or(std::vector<double>(static_cast<std::size_t>(config.relays), 0.5));
        const Scheme s = parse_scheme(scheme);
        EpisodeMetrics metrics;
        {
          py::gil_scoped_release release;
          metrics = run_episode(s, config, a, slots);
        }
        return metrics_dict(metrics);
      },
      py::arg("scheme"), py::arg("config"), py::arg("alpha") = py::none(), py::arg("slots") = 10000);

  m.def(
      "parse_config",
      [](const std::string& text) { return to_json(parse_config_text(text)); },
      py::arg("json_text"), "Resolved config as JSON text (all defaults filled in).");

  m.def(
      "run_config",
      [](const std::string& text, int threads) {
        const ExperimentSpec spec = parse_config_text(text);
        std::vector<SweepResult> results;
        {
          py::gil_scoped_release release;
          results = run_sweep(spec.schemes, spec.axis, spec.points, spec.network(),
                              spec.run_options(threads));
        }
        return results_csv(spec, results);
      },
      py::arg("json_text"), py::arg("threads") = 1, "Runs an experiment, returns the CSV text.");
}

#include "r2a/gradcheck.hpp"
#include "r2a/pipeline.hpp"
#include "r2a/r2a_model.hpp"
#include "r2a/synthetic.hpp"
#include "r2a/trainer.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace r2a;

namespace {

std::vector<double> py_softmax(const std::vector<double>& scores,
                               const std::vector<bool>& mask) {
  Tensor t({static_cast<int>(scores.size())});
  std::copy(scores.begin(), scores.end(), t.data());
  std::vector<uint8_t> m(mask.begin(), mask.end());
  ad::Value out = ad::softmax(ad::Value::constant(std::move(t)), m);
  return std::vector<double>(out.val().data(), out.val().data() + out.val().size());
}

double py_smcd(const std::vector<double>& a, const std::vector<double>& b) {
  Tensor ta({static_cast<int>(a.size())}), tb({static_cast<int>(b.size())});
  std::copy(a.begin(), a.end(), ta.data());
  std::copy(b.begin(), b.end(), tb.data());
  return ad::soft_margin_cosine_distance(ad::Value::constant(std::move(ta)),
                                         ad::Value::constant(std::move(tb)))
      .item();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "rationale-to-attention transfer pipeline (native core)";

  m.def("softmax", &py_softmax, py::arg("scores"), py::arg("mask") = std::vector<bool>{},
        "masked, numerically stabilized softmax");
  m.def("soft_margin_cosine_distance", &py_smcd, py::arg("a"), py::arg("b"),
        "max(0, 1 - cos(a,b) - 0.1)");
  m.def(
      "rationale_frequency",
      [](const std::vector<std::vector<int>>& tokens,
         const std::vector<std::vector<int>>& rationales, int vocab_size) {
        std::vector<corpus::Example> split;
        for (size_t i = 0; i < tokens.size(); ++i) {
          corpus::Example ex;
          ex.tokens = tokens[i];
          ex.rationale.assign(rationales[i].begin(), rationales[i].end());
          split.push_back(std::move(ex));
        }
        return corpus::rationale_frequency(split, vocab_size).values();
      },
      py::arg("tokens"), py::arg("rationales"), py::arg("vocab_size"),
      "per-occurrence rationale frequency table");
  m.def(
      "assign_bins",
      [](const std::vector<std::string>& tokens, int bins, uint64_t seed) {
        corpus::Vocab vocab;
        for (const auto& t : tokens) vocab.add(t);
        return corpus::assign_bins(vocab, bins, seed).bin_of;
      },
      py::arg("tokens"), py::arg("bins"), py::arg("seed"),
      "balanced random vocabulary binning (ids 0/1 are padding/unknown)");
  m.def(
      "normalize_mask",
      [](const std::vector<int>& mask) {
        std::vector<uint8_t> m(mask.begin(), mask.end());
        return trainer::normalize_mask(m);
      },
      py::arg("mask"));
  m.def("attention_distance", &trainer::attention_distance_report, py::arg("source"),
        py::arg("oracle"), "mean soft-margin cosine distance across aligned rows");
  m.def(
      "run",
      [](const std::string& command, const std::string& config_path) {
        return cli::run(command, config_path);
      },
      py::arg("command"), py::arg("config_path"),
      "run one pipeline stage; returns the process exit status");
  m.def(
      "run_with_overrides",
      [](const std::string& command, const std::string& config_path,
         const std::map<std::string, std::string>& overrides) {
        cli::RunConfig cfg = cli::RunConfig::load(config_path);
        for (const auto& [k, v] : overrides) cfg.set(k, v);
        return cli::run_config(command, cfg);
      },
      py::arg("command"), py::arg("config_path"), py::arg("overrides"));
  m.def("commands", [] { return cli::kCommands; });

  m.attr("__version__") = "0.1.0";
}

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>

#include "gaboredge/config.hpp"
#include "gaboredge/detector.hpp"
#include "gaboredge/eval.hpp"
#include "gaboredge/gabor.hpp"

namespace py = pybind11;
using namespace gaboredge;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

RgbImage to_rgb(const U8Array& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) throw ParameterError("expected an (H, W, 3) uint8 array");
  RgbImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::memcpy(img.data.data(), a.data(), img.data.size());
  return img;
}

EdgeMap to_edges(const py::array& a) {
  auto b = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>::ensure(
      a.attr("astype")("bool"));
  if (!b || b.ndim() != 2) throw ParameterError("expected a 2-D edge map");
  EdgeMap e(static_cast<int>(b.shape(1)), static_cast<int>(b.shape(0)));
  std::memcpy(e.data().data(), b.data(), e.size());
  return e;
}

template <typename T>
py::array_t<T> to_numpy(const Plane<T>& p) {
  py::array_t<T> out({p.height(), p.width()});
  std::memcpy(out.mutable_data(), p.data().data(), p.size() * sizeof(T));
  return out;
}

py::array_t<bool> edges_to_numpy(const EdgeMap& e) {
  py::array_t<bool> out({e.height(), e.width()});
  auto* dst = out.mutable_data();
  for (std::size_t i = 0; i < e.size(); ++i) dst[i] = e.data()[i] != 0;
  return out;
}

// Detector settings use the same keys as the "detector" block of a run config.
DetectorConfig detector_from(const py::object& settings) {
  if (settings.is_none()) return {};
  const std::string text = py::module_::import("json").attr("dumps")(settings).cast<std::string>();
  return parse_config({{"detector", nlohmann::json::parse(text)}}).detector;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-scale Gabor color edge detection";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "rgb_to_lab",
      [](const U8Array& image, bool srgb_gamma) {
        const auto lab = rgb_to_lab(to_rgb(image), {srgb_gamma});
        return py::make_tuple(to_numpy(lab.l), to_numpy(lab.a), to_numpy(lab.b));
      },
      py::arg("image"), py::arg("srgb_gamma") = false, "(L*, a*, b*) planes of an RGB image.");

  m.def(
      "gabor_kernel",
      [](double f, double theta, double gamma, double eta, double truncation) {
        const auto k = build_kernel(f, theta, gamma, eta, truncation);
        py::array_t<std::complex<double>> out({k.side(), k.side()});
        auto* dst = out.mutable_data();
        for (std::size_t i = 0; i < k.re.size(); ++i) dst[i] = {k.re[i], k.im[i]};
        return out;
      },
      py::arg("frequency"), py::arg("theta"), py::arg("gamma") = 1.0, py::arg("eta") = 2.0,
      py::arg("truncation") = 3.0, "Sampled kernel; row index is the vertical offset.");

  m.def(
      "detect",
      [](const U8Array& image, const py::object& settings) {
        const auto img = to_rgb(image);
        const auto cfg = detector_from(settings);
        py::gil_scoped_release release;
        auto e = detect_edges(img, cfg);
        py::gil_scoped_acquire acquire;
        return edges_to_numpy(e);
      },
      py::arg("image"), py::arg("settings") = py::none(),
      "Boolean edge map. `settings` takes the keys of a config's detector block.");

  m.def(
      "edge_strength",
      [](const U8Array& image, const py::object& settings) {
        const auto st = compute_stages(to_rgb(image), detector_from(settings));
        py::dict out;
        static constexpr const char* kNames[] = {"L", "a", "b"};
        std::size_t idx = 0;
        for (int c : st.channel_ids) {
          for (int s = 0; s < st.scales; ++s) {
            out[py::str(std::string(kNames[c]) + std::to_string(s))] =
                to_numpy(st.channel_esms[idx++].strength);
          }
        }
        out["fused"] = to_numpy(st.fused.strength);
        out["equalized"] = to_numpy(st.equalized.strength);
        out["thinned"] = to_numpy(st.thinned);
        out["orientation"] = to_numpy(st.orientation.k_star);
        return out;
      },
      py::arg("image"), py::arg("settings") = py::none(),
      "Intermediate maps keyed 'L0', 'a1', ..., 'fused', 'equalized', 'thinned', 'orientation'.");

  m.def(
      "add_noise",
      [](const U8Array& image, double sigma, std::uint64_t seed) {
        const auto noisy = add_gaussian_noise(to_rgb(image), {sigma, seed});
        py::array_t<std::uint8_t> out({noisy.height, noisy.width, 3});
        std::memcpy(out.mutable_data(), noisy.data.data(), noisy.data.size());
        return out;
      },
      py::arg("image"), py::arg("sigma") = 15.0, py::arg("seed") = 42);

  m.def(
      "match",
      [](const py::array& detected, const py::array& gt, double tolerance) {
        const auto d = to_edges(detected);
        const auto g = to_edges(gt);
        const double tol = tolerance > 0 ? tolerance : default_tolerance(g.width(), g.height());
        const auto c = match_edges(d, g, tol);
        const auto pr = precision_recall(c);
        py::dict out;
        out["tp"] = c.tp;
        out["fp"] = c.fp;
        out["mt"] = c.mt;
        out["um"] = c.um;
        out["precision"] = pr.precision;
        out["recall"] = pr.recall;
        out["f"] = f_measure(pr.precision, pr.recall);
        out["tolerance"] = tol;
        return out;
      },
      py::arg("detected"), py::arg("gt"), py::arg("tolerance") = 0.0,
      "Counts and P/R/F; tolerance <= 0 picks the size-based default.");

  m.def(
      "fom", [](const py::array& detected, const py::array& gt) {
        return fom(to_edges(detected), to_edges(gt));
      },
      py::arg("detected"), py::arg("gt"));
}

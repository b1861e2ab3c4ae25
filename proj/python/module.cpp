#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nmzi/config.hpp"
#include "nmzi/fock.hpp"

namespace py = pybind11;
using namespace nmzi;

PYBIND11_MODULE(_nestedmzi, m) {
    m.doc() = "Coherent light through a nested interferometer with vibrating mirrors";

    py::class_<EulerAngles>(m, "EulerAngles")
        .def(py::init<>())
        .def(py::init([](double phi, double theta, double psi) {
                 return EulerAngles{phi, theta, psi};
             }),
             py::arg("phi"), py::arg("theta"), py::arg("psi"))
        .def_readwrite("phi", &EulerAngles::phi)
        .def_readwrite("theta", &EulerAngles::theta)
        .def_readwrite("psi", &EulerAngles::psi);

    py::class_<BSMatrix>(m, "BSMatrix")
        .def_readonly("b11", &BSMatrix::b11)
        .def_readonly("b12", &BSMatrix::b12)
        .def_readonly("b21", &BSMatrix::b21)
        .def_readonly("b22", &BSMatrix::b22)
        .def("unitarity_error", &BSMatrix::unitarity_error)
        .def("transmittance", &BSMatrix::transmittance)
        .def("reflectance", &BSMatrix::reflectance);

    py::class_<MirrorSpec>(m, "MirrorSpec")
        .def_readwrite("label", &MirrorSpec::label)
        .def_readwrite("freq_hz", &MirrorSpec::freq_hz)
        .def_readwrite("psi0", &MirrorSpec::psi0)
        .def_readwrite("phi0", &MirrorSpec::phi0)
        .def("modulation", &MirrorSpec::modulation, py::arg("t"));

    m.def("bs_matrix", &bs_matrix, py::arg("angles"));
    m.def("angles_from_transmittance", &angles_from_transmittance, py::arg("tau"),
          py::arg("phi") = 0.0, py::arg("psi") = 0.0);
    m.def("mirror_matrix", &mirror_matrix, py::arg("mirror"), py::arg("t"));
    m.def(
        "apply_bs",
        [](const BSMatrix& b, cplx top, cplx left) { return apply_bs(b, top, left); },
        py::arg("b"), py::arg("in_top"), py::arg("in_left"));
    m.def("oracle_compare", &oracle_compare, py::arg("alpha_top"), py::arg("alpha_left"),
          py::arg("b"), py::arg("cutoff"));
    m.def("default_cutoff", &default_cutoff, py::arg("abs_alpha_top"),
          py::arg("abs_alpha_left"));

    py::enum_<Setup2Mode>(m, "Setup2Mode")
        .value("PaperLiteral", Setup2Mode::PaperLiteral)
        .value("Physical", Setup2Mode::Physical);

    py::class_<NetworkConfig>(m, "NetworkConfig")
        .def_static("defaults", &NetworkConfig::defaults)
        .def_readwrite("mirrors", &NetworkConfig::mirrors)
        .def_readwrite("bs_phi", &NetworkConfig::bs_phi)
        .def_readwrite("bs_psi", &NetworkConfig::bs_psi)
        .def_readwrite("lambda_", &NetworkConfig::lambda)
        .def("validate", &NetworkConfig::validate);

    py::class_<ModeAmplitudes>(m, "ModeAmplitudes")
        .def_readonly("time", &ModeAmplitudes::time)
        .def_readonly("amps", &ModeAmplitudes::amps)
        .def("at", &ModeAmplitudes::at, py::arg("mode"))
        .def("terminal_power", &ModeAmplitudes::terminal_power);

    py::class_<Network>(m, "Network")
        .def_static("setup1", &Network::setup1, py::arg("cfg"))
        .def_static("setup2", &Network::setup2, py::arg("cfg"), py::arg("mode"))
        .def("propagate", &Network::propagate, py::arg("alpha"), py::arg("t"))
        .def("detector", &Network::detector, py::arg("alpha"), py::arg("t"))
        .def_property_readonly("setup", &Network::setup)
        .def_property_readonly("lambda_", &Network::lambda);

    m.def("tuned_lambda", &tuned_lambda, py::arg("cfg"), py::arg("mode"));
    m.def("verify_phase_relation", &verify_phase_relation, py::arg("cfg"),
          py::arg("lambda_"), py::arg("t"));
    m.def("closed_form_beta", &closed_form_beta, py::arg("setup"), py::arg("mode"),
          py::arg("cfg"), py::arg("alpha"), py::arg("t"));

    py::class_<TimeSeries>(m, "TimeSeries")
        .def_readonly("samples", &TimeSeries::samples)
        .def_readonly("rate", &TimeSeries::rate)
        .def_readonly("duration", &TimeSeries::duration);

    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("freqs", &Spectrum::freqs)
        .def_readonly("power", &Spectrum::power)
        .def_readonly("bin_hz", &Spectrum::bin_hz)
        .def("total_power", &Spectrum::total_power);

    py::class_<SpectralLine>(m, "SpectralLine")
        .def_readonly("freq_hz", &SpectralLine::freq_hz)
        .def_readonly("weight", &SpectralLine::weight);

    py::class_<PeakEntry>(m, "PeakEntry")
        .def_readonly("mirror", &PeakEntry::mirror)
        .def_readonly("freq_hz", &PeakEntry::freq_hz)
        .def_readonly("power", &PeakEntry::power)
        .def_readonly("prominence_db", &PeakEntry::prominence_db)
        .def_readonly("present", &PeakEntry::present);

    m.def("sample_detector", &sample_detector, py::arg("net"), py::arg("alpha"),
          py::arg("duration"), py::arg("rate"));
    m.def("psd", &psd, py::arg("ts"));
    m.def("analytic_lines", &analytic_lines, py::arg("setup"), py::arg("mode"),
          py::arg("cfg"), py::arg("alpha"));
    m.def(
        "peak_report",
        [](const Spectrum& s, const NetworkConfig& cfg, double threshold_db) {
            return peak_report(s, cfg.mirrors, threshold_db);
        },
        py::arg("spectrum"), py::arg("cfg"), py::arg("threshold_db") = kPeakThresholdDb);
}

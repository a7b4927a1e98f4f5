#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "aqolab/evolution.hpp"
#include "aqolab/gap_bounds.hpp"
#include "aqolab/hardness/extraction.hpp"
#include "aqolab/hardness/sat.hpp"
#include "aqolab/schedule.hpp"
#include "aqolab/spectrum.hpp"

namespace aqolab {

using Json = nlohmann::ordered_json;

// Exact values travel as strings: "p" or "p/q".
Json to_json(const DegeneracySpectrum& spec);
DegeneracySpectrum spectrum_from_json(const Json& j);

Json to_json(const DiagonalHamiltonian& h);
DiagonalHamiltonian hamiltonian_from_json(const Json& j);

Json to_json(const IsingModel& model);
IsingModel ising_from_json(const Json& j);

// Every tunable in one place. Defaults match the library defaults.
struct RunConfig {
  double secular_tolerance = 1e-12;
  double continuity_tolerance = 1e-9;
  double norm_tolerance = 1e-8;
  double frame_tolerance = 1e-10;

  double c = 0.02;
  double eta = 0.1;
  double k = 0.25;
  double b = 0.1;
  double p = 1.5;
  double eps = 0.2;
  bool enforce_condition = true;

  std::size_t scan_points = 1000;
  std::size_t window_points = 101;
  std::size_t bounds_points = 50;
  std::size_t table_points = 1024;

  int ising_ceiling = 24;
  int sat_ceiling = SatGadget::default_ceiling;
  std::uint64_t seed = 1;

  void validate() const;
  CertificateOptions certificate_options() const;
  ScheduleOptions schedule_options() const;
  EvolveOptions evolve_options() const;

  static RunConfig from_json(const Json& j);
  Json to_json() const;
};

// A problem is a spectrum, an Ising model, or a family descriptor such as
// {"family": "grover", "n": 12, "d0": 2}. Ising input is enumerated; when
// `normalized` is requested the result is mapped onto [0, 1].
DegeneracySpectrum load_problem(const Json& j, const RunConfig& config, bool normalized);

// Same inputs but kept exact and unnormalised, for the reductions.
DiagonalHamiltonian load_hamiltonian(const Json& j, const RunConfig& config);

Json read_json(std::istream& in);
Json read_json_file(const std::string& path);

Json to_json(const SpectralProfile& profile);
Json to_json(const GapCertificate& cert);
Json to_json(const SoundnessReport& r);
Json to_json(const SandwichReport& r);
Json to_json(const BracketReport& r);
Json to_json(const VariationalReport& r);
Json to_json(const RightRegionReport& r);
Json to_json(const MinimumLocation& r);
Json to_json(const SchedulePlan& plan, bool with_table);
Json to_json(const EvolutionResult& r);
Json to_json(const ProjectorBoundsReport& r);
Json to_json(const ScalingTable& t);
Json to_json(const ExtractionTranscript& t);
Json to_json(const DisambiguationResult& r);

}  // namespace aqolab

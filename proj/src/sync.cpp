#include "cvqkd/sync.hpp"

#include <cmath>
#include <ostream>

#include "cvqkd/error.hpp"

namespace cvqkd::sync {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Lock: return "lock";
    case EventKind::Unlock: return "unlock";
    case EventKind::PacketStart: return "packet_start";
    case EventKind::PolStepAccept: return "pol_step_accept";
    case EventKind::PolStepReject: return "pol_step_reject";
  }
  return "unknown";
}

void EventLog::record(double time_ns, EventKind kind, std::string detail) {
  events_.push_back({time_ns, kind, std::move(detail)});
}

std::size_t EventLog::count(EventKind kind) const {
  std::size_t n = 0;
  for (const auto& e : events_) n += e.kind == kind ? 1 : 0;
  return n;
}

void EventLog::write_csv(std::ostream& out) const {
  out << "time_ns,event,detail\n";
  out.precision(15);
  for (const auto& e : events_) out << e.time_ns << ',' << to_string(e.kind) << ',' << e.detail << '\n';
}

double nominal_reference_z(double n_bob, const rx::ReceiverParams& params) {
  const double c2 = params.counts_per_snu * params.counts_per_snu;
  const double g2 = params.lo.lo_power / params.lo.lo_power_nominal;
  const double eta = params.detector.efficiency();
  return 2.0 * c2 * g2 * eta * n_bob + 4.0 * (c2 * g2 + c2 * params.detector.nu_e);
}

LockState initial_lock_state(double n_bob, const rx::ReceiverParams& params, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw DomainError("lock threshold fraction must lie in (0, 1)");
  LockState state;
  state.z_threshold = fraction * nominal_reference_z(n_bob, params);
  state.period_ns = static_cast<int>(std::lround(params.lo.period_ns));
  return state;
}

namespace {
void reset_probes(LockState& s) {
  s.probe_sum = {0.0, 0.0, 0.0};
  s.probe_count = 0;
}
}  // namespace

LockState lock_step(LockState s, const rx::PulseFrame& frame, EventLog* log) {
  s.last_adjustment = 0;
  const auto& ref = frame[TimeBin::Reference];
  const bool hit = ref.has_value() && z_value(*ref) >= s.z_threshold;
  const double time_ns = frame.time_s * 1e9;

  if (s.status == LockStatus::Searching) {
    s.hits = hit ? s.hits + 1 : 0;
    if (s.hits >= s.confirm_hits) {
      s.status = LockStatus::Locked;
      s.hits = 0;
      s.misses = 0;
      reset_probes(s);
      if (log) log->record(time_ns, EventKind::Lock, "bin_phase_ns=" + std::to_string(s.bin_phase_ns));
    }
    return s;
  }

  if (!hit) {
    if (++s.misses > s.miss_budget) {
      s.status = LockStatus::Searching;
      s.misses = 0;
      s.hits = 0;
      reset_probes(s);
      if (log) log->record(time_ns, EventKind::Unlock, "bin_phase_ns=" + std::to_string(s.bin_phase_ns));
    }
    return s;
  }
  s.misses = 0;

  if (frame.reference_probe_z) {
    for (int i = 0; i < 3; ++i) s.probe_sum[i] += (*frame.reference_probe_z)[i];
    if (++s.probe_count >= s.recenter_window) {
      const auto& [early, on_time, late] = s.probe_sum;
      if (early > on_time && early >= late) {
        s.last_adjustment = -1;
      } else if (late > on_time) {
        s.last_adjustment = 1;
      }
      s.bin_phase_ns = (s.bin_phase_ns + s.last_adjustment + s.period_ns) % s.period_ns;
      reset_probes(s);
    }
  }
  return s;
}

PacketDetector::PacketDetector(PacketDetectorParams params, double z_shot, double z_elec, double eta)
    : params_(params), z_shot_(z_shot), z_elec_(z_elec), eta_(eta) {
  if (!(params_.trigger_factor > 1.0)) throw DomainError("trigger factor must exceed 1");
  if (params_.mean_window < 1) throw DomainError("rolling window must be at least one frame");
  if (!(z_shot > 0.0)) throw CalibrationError("packet detection needs a positive Z_shot");
}

bool PacketDetector::push(const rx::PulseFrame& corrected_frame) {
  const auto& ref = corrected_frame[TimeBin::Reference];
  if (!ref) throw FramingError("packet detection needs the reference bin");
  return push_photons(photon_number(z_value(*ref), z_shot_, z_elec_, eta_));
}

bool PacketDetector::push_photons(double photons) {
  ++frames_;
  if (frames_ <= static_cast<std::uint64_t>(params_.warmup_frames)) {
    mean_ += (photons - mean_) / static_cast<double>(frames_);
    return false;
  }
  if (holdoff_ > 0) {
    --holdoff_;
  } else if (mean_ > 0.0 && photons >= params_.trigger_factor * mean_) {
    holdoff_ = params_.holdoff_frames;
    return true;
  }
  mean_ += (photons - mean_) / static_cast<double>(params_.mean_window);
  return false;
}

std::vector<std::size_t> detect_packet_starts(std::span<const rx::PulseFrame> raw_frames,
                                              const PacketDetectorParams& params, double z_shot, double z_elec,
                                              double eta) {
  PacketDetector detector(params, z_shot, z_elec, eta);
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < raw_frames.size(); ++i) {
    if (detector.push(rx::bias_correct(raw_frames[i]))) starts.push_back(i);
  }
  return starts;
}

channel::Jones actuator_unitary(const std::array<double, 4>& voltages, const ActuatorModel& model) {
  channel::Jones u = channel::Jones::identity();
  for (std::size_t i = 0; i < voltages.size(); ++i) {
    const double angle = model.rad_per_volt * voltages[i];
    const channel::Jones r = (i % 2 == 0) ? channel::rotation_z(angle) : channel::rotation_x(angle);
    u = r * u;
  }
  return u;
}

bool accept_pol_step(const PolMeasurement& previous, const PolMeasurement& trial, int cycle_count_target) {
  const int previous_error = std::abs(previous.cycle_count - cycle_count_target);
  const int trial_error = std::abs(trial.cycle_count - cycle_count_target);
  return trial.mean_z >= previous.mean_z && trial_error <= previous_error;
}

PolController pol_step(PolController ctrl, const PolProbe& probe, EventLog* log, double time_ns) {
  const int i = ctrl.next_actuator;
  ctrl.next_actuator = (ctrl.next_actuator + 1) % static_cast<int>(ctrl.actuators.size());

  const PolMeasurement baseline = probe(ctrl.actuators);
  const auto samples = static_cast<double>(ctrl.accepted + ctrl.rejected);
  ctrl.z_history = (ctrl.z_history * samples + baseline.mean_z) / (samples + 1.0);

  const double first = ctrl.first_direction[i];
  ctrl.first_direction[i] = -ctrl.first_direction[i];
  for (const double direction : {first, -first}) {
    auto trial = ctrl.actuators;
    trial[i] += direction * ctrl.step;
    const PolMeasurement m = probe(trial);
    if (accept_pol_step(baseline, m, ctrl.cycle_count_target)) {
      ctrl.actuators = trial;
      ++ctrl.accepted;
      if (log) {
        log->record(time_ns, EventKind::PolStepAccept,
                    "actuator=" + std::to_string(i) + (direction > 0 ? " up" : " down"));
      }
      return ctrl;
    }
  }
  ++ctrl.rejected;
  if (log) log->record(time_ns, EventKind::PolStepReject, "actuator=" + std::to_string(i));
  return ctrl;
}

}  // namespace cvqkd::sync

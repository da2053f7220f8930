#pragma once

// Bob's control plane: timing lock with a 1 ns slew limit, bright-marker
// packet detection and the four-actuator polarization hill-climb.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/receiver.hpp"

namespace cvqkd::sync {

enum class EventKind { Lock, Unlock, PacketStart, PolStepAccept, PolStepReject };
const char* to_string(EventKind kind);

struct Event {
  double time_ns = 0.0;
  EventKind kind = EventKind::Lock;
  std::string detail;
};

class EventLog {
 public:
  void record(double time_ns, EventKind kind, std::string detail = {});
  const std::vector<Event>& events() const { return events_; }
  std::size_t count(EventKind kind) const;
  /// CSV: time_ns,event,detail
  void write_csv(std::ostream& out) const;

 private:
  std::vector<Event> events_;
};

// ---------------------------------------------------------------- timing lock

enum class LockStatus { Searching, Locked };

struct LockState {
  LockStatus status = LockStatus::Searching;
  int bin_phase_ns = 0;  ///< in [0, period)
  int misses = 0;
  int hits = 0;          ///< consecutive hits while searching
  int confirm_hits = 4;  ///< hits needed to declare lock
  double z_threshold = 0.0;  ///< control-path Z, counts^2
  int miss_budget = 8;
  /// Periods of probe data accumulated before one recentering decision.
  int recenter_window = 32;
  int period_ns = 1000;
  int last_adjustment = 0;  ///< -1, 0 or +1 ns applied on the last step

  std::array<double, 3> probe_sum{0.0, 0.0, 0.0};
  int probe_count = 0;
};

/// Expected control-path Z of a reference pulse carrying n_bob photons at the
/// receiver input, including the doubled noise floor.
double nominal_reference_z(double n_bob, const rx::ReceiverParams& params);

/// z_threshold = fraction * nominal_reference_z (default fraction 0.25).
LockState initial_lock_state(double n_bob, const rx::ReceiverParams& params, double fraction = 0.25);

/// One period of the lock state machine on a bias-corrected frame.
/// Searching -> Locked after confirm_hits consecutive periods with the
/// reference Z above the threshold. While
/// locked, probe samples (early, on time, late) are accumulated and the LO
/// phase moves by at most 1 ns toward the brightest one. Misses beyond the
/// budget revert to Searching; the LO phase is then held.
LockState lock_step(LockState state, const rx::PulseFrame& frame, EventLog* log = nullptr);

// ----------------------------------------------------------- packet detection

struct PacketDetectorParams {
  double trigger_factor = 2.0;  ///< fire at >= factor * rolling mean
  int mean_window = 256;        ///< frames in the rolling reference mean
  /// Frames averaged into the initial mean before triggering is allowed.
  int warmup_frames = 64;
  /// Frames suppressed after a trigger (the rest of the packet).
  std::size_t holdoff_frames = tx::kPacketSymbols - 1;
};

/// Streaming bright-marker detector on reference-bin photon estimates.
class PacketDetector {
 public:
  PacketDetector(PacketDetectorParams params, double z_shot, double z_elec, double eta);

  /// Feeds one bias-corrected frame; returns true if it is a packet start.
  bool push(const rx::PulseFrame& corrected_frame);
  /// Feeds a raw photon estimate directly.
  bool push_photons(double photons);
  double rolling_mean() const { return mean_; }
  std::uint64_t frames_seen() const { return frames_; }

 private:
  PacketDetectorParams params_;
  double z_shot_;
  double z_elec_;
  double eta_;
  double mean_ = 0.0;
  std::uint64_t frames_ = 0;
  std::size_t holdoff_ = 0;
};

/// Scans a captured frame stream and returns the indices of every frame on
/// which the detector fires.
std::vector<std::size_t> detect_packet_starts(std::span<const rx::PulseFrame> raw_frames,
                                              const PacketDetectorParams& params, double z_shot, double z_elec,
                                              double eta);

// --------------------------------------------------------------- polarization

/// Fiber squeezers: actuator i rotates about axis z (even i) or x (odd i) by
/// rad_per_volt * voltage. The controller sits in front of Bob's PBS.
struct ActuatorModel {
  double rad_per_volt = 0.1;
};

channel::Jones actuator_unitary(const std::array<double, 4>& voltages, const ActuatorModel& model);

struct PolMeasurement {
  double mean_z = 0.0;  ///< mean reference Z (or photons) over the window
  int cycle_count = 0;  ///< frames in the window with Z above the lock threshold
};

struct PolController {
  std::array<double, 4> actuators{0.0, 0.0, 0.0, 0.0};
  double step = 0.2;  ///< volts
  int next_actuator = 0;
  /// Direction tried first on the next visit of each actuator; flips after
  /// every visit so noise-driven acceptances do not walk one way.
  std::array<int, 4> first_direction{1, 1, 1, 1};
  int window_frames = 64;
  int cycle_count_target = 64;
  /// Running mean of the accepted window measurements.
  double z_history = 0.0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
};

/// True iff the trial keeps the mean Z at least as high and the cycle count
/// at least as close to the target.
bool accept_pol_step(const PolMeasurement& previous, const PolMeasurement& trial, int cycle_count_target);

/// Measures the link with the given actuator voltages.
using PolProbe = std::function<PolMeasurement(const std::array<double, 4>& voltages)>;

/// Perturbs the next actuator one way, then the other, keeping the first
/// accepted setting; otherwise restores it. Run only between packets.
PolController pol_step(PolController ctrl, const PolProbe& probe, EventLog* log = nullptr, double time_ns = 0.0);

}  // namespace cvqkd::sync

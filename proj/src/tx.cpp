#include "antsim/tx.hpp"

namespace antsim {

Transmitter::Transmitter(TxConfig cfg, SimTime start)
    : cfg_(cfg), next_keepalive_(start + cfg.keepalive_period) {
  cfg_.codec.validate();
}

void Transmitter::command(CommandMode mode, SimTime /*t*/) {
  if (!cfg_.enabled) return;
  pending_.push_back(mode);
}

std::vector<Byte> Transmitter::step(SimTime now) {
  std::vector<Byte> out;
  if (!cfg_.enabled) return out;
  if (!pending_.empty()) {
    out.reserve(pending_.size() * 3);
    for (auto mode : pending_) {
      const Frame f = encode_frame(mode, cfg_.codec);
      out.insert(out.end(), f.begin(), f.end());
      ++frames_sent_;
    }
    pending_.clear();
    next_keepalive_ = now + cfg_.keepalive_period;
  } else if (cfg_.keepalive && now >= next_keepalive_) {
    out.push_back(cfg_.codec.keepalive);
    ++keepalives_sent_;
    next_keepalive_ = now + cfg_.keepalive_period;
  }
  return out;
}

void Transmitter::set_enabled(bool enabled, SimTime now) {
  if (enabled == cfg_.enabled) return;
  cfg_.enabled = enabled;
  if (enabled) {
    next_keepalive_ = now;
  } else {
    pending_.clear();
  }
}

}  // namespace antsim

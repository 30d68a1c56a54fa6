#include "phaseret/bpnn/checkpoint.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace phaseret::bpnn {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    require(static_cast<bool>(in_ >> w), Errc::parse, "checkpoint: unexpected end of file");
    return w;
  }

  void expect(const std::string& key) {
    const std::string w = word();
    require(w == key, Errc::parse, "checkpoint: expected '" + key + "', found '" + w + "'");
  }

  double real() {
    const std::string w = word();
    try {
      std::size_t used = 0;
      const double v = std::stod(w, &used);
      require(used == w.size(), Errc::parse, "checkpoint: bad number '" + w + "'");
      return v;
    } catch (const std::logic_error&) {
      fail(Errc::parse, "checkpoint: bad number '" + w + "'");
    }
  }

  std::size_t count() {
    const std::string w = word();
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    require(ec == std::errc{} && ptr == w.data() + w.size(), Errc::parse, "checkpoint: bad integer '" + w + "'");
    return v;
  }

 private:
  std::istream& in_;
};

}  // namespace

void write_checkpoint(std::ostream& out, const BpnnCheckpoint& c) {
  out << "phaseret-bpnn-checkpoint " << kCheckpointVersion << '\n';
  out << "roots " << c.config.roots << '\n';
  out << "segments " << c.config.segments << '\n';
  out << "hidden " << c.config.hidden.size();
  for (std::size_t h : c.config.hidden) out << ' ' << h;
  out << '\n';
  out << "dropout " << fmt_double(c.config.dropout) << '\n';
  out << "learning_rate " << fmt_double(c.config.learning_rate) << '\n';
  out << "epochs " << c.config.epochs << '\n';
  out << "seed " << c.config.seed << '\n';
  out << "eval_every " << c.config.eval_every << '\n';
  out << "widths " << c.params.widths.size();
  for (std::size_t w : c.params.widths) out << ' ' << w;
  out << '\n';
  out << "grid " << c.omegas.size() << '\n';
  for (double w : c.omegas) out << fmt_double(w) << '\n';
  out << "params " << c.params.values.size() << '\n';
  for (double v : c.params.values) out << fmt_double(v) << '\n';
  out << "end\n";
}

BpnnCheckpoint read_checkpoint(std::istream& in) {
  Reader r(in);
  r.expect("phaseret-bpnn-checkpoint");
  const std::size_t version = r.count();
  require(version == kCheckpointVersion, Errc::parse, "checkpoint: unsupported version " + std::to_string(version));
  BpnnCheckpoint c;
  r.expect("roots");
  c.config.roots = r.count();
  r.expect("segments");
  c.config.segments = r.count();
  r.expect("hidden");
  c.config.hidden.resize(r.count());
  for (std::size_t& h : c.config.hidden) h = r.count();
  r.expect("dropout");
  c.config.dropout = r.real();
  r.expect("learning_rate");
  c.config.learning_rate = r.real();
  r.expect("epochs");
  c.config.epochs = r.count();
  r.expect("seed");
  c.config.seed = r.count();
  r.expect("eval_every");
  c.config.eval_every = r.count();
  r.expect("widths");
  std::vector<std::size_t> widths(r.count());
  for (std::size_t& w : widths) w = r.count();
  r.expect("grid");
  c.omegas.resize(r.count());
  for (double& w : c.omegas) w = r.real();
  r.expect("params");
  const std::size_t n = r.count();
  c.config.validate();
  c.params = MlpParameters(widths, c.config.dropout);
  require(widths == bpnn_widths(c.config, c.omegas.size()), Errc::parse, "checkpoint: widths disagree with config");
  require(n == c.params.values.size(), Errc::parse,
          "checkpoint: expected " + std::to_string(c.params.values.size()) + " parameters, header says " +
              std::to_string(n));
  for (double& v : c.params.values) v = r.real();
  r.expect("end");
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const BpnnCheckpoint& checkpoint) {
  std::ofstream out(path);
  require(static_cast<bool>(out), Errc::io, "cannot open " + path.string() + " for writing");
  write_checkpoint(out, checkpoint);
  require(static_cast<bool>(out), Errc::io, "failed writing " + path.string());
}

BpnnCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::io, "cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace phaseret::bpnn

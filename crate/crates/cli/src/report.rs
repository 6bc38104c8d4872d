//! Plain structured-text summary: LPML, Kendall tau point and interval,
//! modal cluster count, the selected partition and its per-cluster table.

use copmix::inference::{ClusterSummary, LpmlSummary, Partition, TauEstimate};
use copmix::sampler::PosteriorDraws;

use crate::drawsfile::encode_labels;

pub struct SummaryReport<'a> {
    pub draws: &'a PosteriorDraws,
    pub lpml: &'a LpmlSummary,
    pub tau: &'a TauEstimate,
    pub empirical_tau: f64,
    pub modal_m: usize,
    pub partition: &'a Partition,
    pub clusters: &'a [ClusterSummary],
}

impl SummaryReport<'_> {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let d = self.draws;
        out.push_str(&format!("family = {}\n", d.family));
        out.push_str(&format!("n = {}\n", d.n));
        out.push_str(&format!("p = {}\n", d.p));
        out.push_str(&format!(
            "chain = iters {} / burnin {} / thin {} / seed {}\n",
            d.n_iter, d.burn_in, d.thin, d.seed
        ));
        out.push_str(&format!("kept_draws = {}\n", d.draws.len()));
        out.push_str(&format!("lpml = {:.6}\n", self.lpml.lpml));
        if !self.lpml.unstable.is_empty() {
            out.push_str(&format!(
                "lpml_unstable_observations = {:?}\n",
                self.lpml.unstable
            ));
        }
        out.push_str(&format!("tau_hat = {:.6}\n", self.tau.point));
        out.push_str(&format!(
            "tau_ci95 = ({:.6}, {:.6})\n",
            self.tau.ci_low, self.tau.ci_high
        ));
        out.push_str(&format!("empirical_tau = {:.6}\n", self.empirical_tau));
        out.push_str(&format!("modal_m = {}\n", self.modal_m));
        out.push_str(&format!("selected_m = {}\n", self.partition.n_clusters()));
        out.push_str(&format!(
            "selected_partition = \"{}\"\n",
            encode_labels(self.partition.labels())
        ));
        out.push_str("cluster,size,theta_mean,theta_q025,theta_q975,weight\n");
        for (j, c) in self.clusters.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{:.6},{:.6},{:.6},{:.6}\n",
                j + 1,
                c.size,
                c.theta_mean,
                c.theta_low,
                c.theta_high,
                c.weight
            ));
        }
        out
    }
}

use serde::Serialize;

/// One entry of `list-plans`. `anchor` names the README section describing the plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlanInfo {
    pub kind: &'static str,
    pub summary: &'static str,
    pub anchor: &'static str,
}

pub const PLANS: [PlanInfo; 6] = [
    PlanInfo {
        kind: "figure3",
        summary: "x π/2 split then N counter-intuitive pulse pairs; momentum-vs-time trace of the deflected arm",
        anchor: "#momentum-ladder",
    },
    PlanInfo {
        kind: "split1d",
        summary: "1D interferometer (adiabatic Δn=100 or Raman Δn=94 route) with recombined fringe pattern",
        anchor: "#one-dimensional-interferometer",
    },
    PlanInfo {
        kind: "ramsey",
        summary: "Ramsey variant closed by a σ-σ π/2 pulse; P_c scanned over the two-photon detuning",
        anchor: "#ramsey-fringes",
    },
    PlanInfo {
        kind: "split2d",
        summary: "Raman z and x ladders giving four arms and a two-dimensional grating",
        anchor: "#two-dimensional-grating",
    },
    PlanInfo {
        kind: "fringes",
        summary: "interference pattern of user-given plane-wave arms, with spacing and contrast",
        anchor: "#fringe-analysis",
    },
    PlanInfo {
        kind: "pattern",
        summary: "arccos phase-mask round trip of a PGM image (or the built-in gear)",
        anchor: "#arbitrary-patterns",
    },
];

pub fn list_plans() -> &'static [PlanInfo] {
    &PLANS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_plans_with_anchors() {
        let plans = list_plans();
        assert_eq!(plans.len(), 6);
        assert!(plans
            .iter()
            .all(|p| p.anchor.starts_with('#') && p.anchor.len() > 1));
        let mut kinds: Vec<_> = plans.iter().map(|p| p.kind).collect();
        kinds.dedup();
        assert_eq!(kinds.len(), 6);
    }
}

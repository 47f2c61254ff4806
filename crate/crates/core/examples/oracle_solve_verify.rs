//! Solves a few instances with the reference oracles and grades candidate
//! answers, including an alternative optimal witness.

use algoeval::oracle::{solve, verify};
use algoeval::{AnswerValue, CandidateAnswer, Payload, ProblemInstance, Split, TaskId};

fn main() -> algoeval::Result<()> {
    let lis = ProblemInstance::new(
        TaskId::LongestIncreasingSubsequence,
        Split::Id,
        Payload::NumberList { list: vec![3, 10, 2, 1, 20, 4, 6, 7] },
    );
    println!("LIS oracle: {:?}", solve(&lis)?.value);
    // any increasing subsequence of optimal length is accepted
    let other = CandidateAnswer::new(lis.task, AnswerValue::OrderedList(vec![2, 4, 6, 7]));
    println!("[2, 4, 6, 7] -> {:?}", verify(&lis, &other).outcome);
    let short = CandidateAnswer::new(lis.task, AnswerValue::OrderedList(vec![3, 10, 20]));
    println!("[3, 10, 20] -> {:?}", verify(&lis, &short).outcome);

    let three = ProblemInstance::new(
        TaskId::ThreeSum,
        Split::Id,
        Payload::ListPlusTarget { list: vec![12, 5, 40, 7, 19], target: 36 },
    );
    println!("3-sum oracle: {:?}", solve(&three)?.value);
    let reordered = CandidateAnswer::new(three.task, AnswerValue::multiset(vec![5, 19, 12]));
    println!("[5, 19, 12] -> {:?}", verify(&three, &reordered).outcome);

    let tsp = ProblemInstance::new(
        TaskId::Tsp,
        Split::Id,
        Payload::AdjacencyMatrix { matrix: vec![vec![0, 2, 9, 10], vec![2, 0, 6, 4], vec![9, 6, 0, 3], vec![10, 4, 3, 0]] },
    );
    println!("TSP oracle: {:?}", solve(&tsp)?.value);
    Ok(())
}

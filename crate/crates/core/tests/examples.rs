macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run_example().unwrap();
        }
    };
}

example!(synth_data);
example!(cart_tree);
example!(adaboost_trace);
example!(random_forest);
example!(extra_trees);
example!(adaboost_r2);
example!(fusion_report);
example!(feature_importance);
example!(tuning);
example!(saved_model);

//! Wire-protocol round trip against an in-process service.

use zkcred_arith::eddsa_keygen;
use zkcred_registry::service::{sign_status_update, StatusUpdateResponse};
use zkcred_registry::{
    registry_service, ClientRegistryState, RegistryClient, RevocationRegistry, ServiceState,
    Status, StatusChange, SubtreeState,
};

async fn spawn_service(state: ServiceState) -> String {
    let app = registry_service(state);
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move {
        axum::serve(listener, app).await.unwrap();
    });
    format!("http://{addr}")
}

#[tokio::test]
async fn full_mirror_sync_flow() {
    let issuer = eddsa_keygen([11u8; 32]);
    let mut reg = RevocationRegistry::new(5).unwrap();
    reg.set_status(100, Status::Revoked).unwrap();
    let expected_root_v1 = reg.root();

    let mut state = ServiceState::new();
    state.insert("main", reg, issuer.public, None);
    let base = spawn_service(state).await;

    let client = RegistryClient::new(&base, "main");
    let root = client.fetch_root().await.unwrap();
    assert_eq!(root.version, 1);
    assert_eq!(root.depth, 5);
    assert_eq!(root.root, expected_root_v1);

    // a full-mirror client catches up by deltas
    let mut local = ClientRegistryState::new(5).unwrap();
    let applied = client.sync(&mut local).await.unwrap();
    assert_eq!(applied, 1);
    assert_eq!(local.root(), expected_root_v1);
    assert!(local.witness(3).unwrap().verify());
    assert!(local.witness(100).is_err());

    // issuer posts an authenticated change set
    let update = sign_status_update(
        &issuer,
        "main",
        1,
        vec![StatusChange {
            id: 7,
            status: Status::Revoked,
        }],
    );
    let resp: StatusUpdateResponse = reqwest::Client::new()
        .post(format!("{base}/registry/main/status"))
        .json(&update)
        .send()
        .await
        .unwrap()
        .json()
        .await
        .unwrap();
    assert_eq!(resp.delta.version, 2);

    let applied = client.sync(&mut local).await.unwrap();
    assert_eq!(applied, 1);
    assert_eq!(local.root(), resp.root);
}

#[tokio::test]
async fn unauthorized_update_rejected() {
    let issuer = eddsa_keygen([11u8; 32]);
    let impostor = eddsa_keygen([12u8; 32]);
    let reg = RevocationRegistry::new(4).unwrap();
    let mut state = ServiceState::new();
    state.insert("main", reg, issuer.public, None);
    let base = spawn_service(state).await;

    let update = sign_status_update(
        &impostor,
        "main",
        0,
        vec![StatusChange {
            id: 1,
            status: Status::Revoked,
        }],
    );
    let status = reqwest::Client::new()
        .post(format!("{base}/registry/main/status"))
        .json(&update)
        .send()
        .await
        .unwrap()
        .status();
    assert_eq!(status, reqwest::StatusCode::FORBIDDEN);
}

#[tokio::test]
async fn hybrid_client_over_the_wire() {
    let issuer = eddsa_keygen([11u8; 32]);
    let mut reg = RevocationRegistry::new(6).unwrap();
    reg.set_status(9, Status::Revoked).unwrap();
    let full = reg.clone();

    let mut state = ServiceState::new();
    state.insert("main", reg, issuer.public, None);
    let base = spawn_service(state).await;
    let client = RegistryClient::new(&base, "main");

    // client keeps the quarter subtree holding leaf 0 and fetches uppers
    let mut sub = SubtreeState::from_registry(&full, 2, 0).unwrap();
    let nodes = client.fetch_nodes(2).await.unwrap();
    let pairs: Vec<_> = nodes.nodes.iter().map(|n| (n.index, n.value)).collect();
    sub.set_upper_nodes(&pairs);

    let w = sub.witness(3).unwrap();
    assert!(w.verify());
    let root = client.fetch_root().await.unwrap();
    assert_eq!(w.root, root.root);
}
